// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#include "ibio/chem/smiles.hpp"

#include <cctype>
#include <cmath>
#include <map>
#include <set>
#include <utility>

#include "ibio/chem/element.hpp"
#include "ibio/chem/rings.hpp"
#include "ibio/common/error.hpp"

namespace ibio::chem {

namespace {

struct PendingRingBond {
  int atom = -1;
  int order = -1;  // -1 = unspecified
};

struct Parser {
  std::string_view text;
  std::size_t pos = 0;
  const ParseOptions& opts;
  MolGraph graph;

  std::vector<int> branch_stack;
  int prev_atom = -1;
  int pending_order = -1;  // bond symbol seen, waiting for an atom/ring digit
  std::map<int, PendingRingBond> open_rings;
  std::set<std::pair<int, int>> bond_pairs;

  explicit Parser(std::string_view t, const ParseOptions& o) : text(t), opts(o) {
    graph.smiles_source = std::string(t);
  }

  [[noreturn]] void fail(ErrorCode code, const std::string& msg) const {
    raise(code, msg + " at position " + std::to_string(pos) + " in '" +
                    std::string(text) + "'");
  }

  void warn(const std::string& msg) const {
    if (opts.warnings) opts.warnings->push_back(msg);
  }

  bool eof() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }
  char take() { return text[pos++]; }

  int add_atom(Atom atom) {
    graph.atoms.push_back(std::move(atom));
    return static_cast<int>(graph.atoms.size()) - 1;
  }

  void add_bond(int a, int b, int order_or_default) {
    if (a == b) fail(ErrorCode::kMalformedSmiles, "bond from atom to itself");
    const auto key = std::minmax(a, b);
    if (!bond_pairs.insert(key).second) {
      fail(ErrorCode::kMalformedSmiles, "duplicate bond between atoms " +
                                            std::to_string(a) + " and " +
                                            std::to_string(b));
    }
    BondOrder order;
    if (order_or_default < 0) {
      order = (graph.atoms[a].aromatic && graph.atoms[b].aromatic)
                  ? BondOrder::kAromatic
                  : BondOrder::kSingle;
    } else {
      order = static_cast<BondOrder>(order_or_default);
    }
    graph.bonds.push_back(Bond{a, b, order});
    graph.atoms[a].degree += 1;
    graph.atoms[b].degree += 1;
  }

  void attach(int atom_idx) {
    if (prev_atom >= 0) add_bond(prev_atom, atom_idx, pending_order);
    pending_order = -1;
    prev_atom = atom_idx;
  }

  // Returns encoded bond order for a bond symbol, or -1 if c is not one.
  static int bond_symbol(char c) {
    switch (c) {
      case '-': return static_cast<int>(BondOrder::kSingle);
      case '=': return static_cast<int>(BondOrder::kDouble);
      case '#': return static_cast<int>(BondOrder::kTriple);
      case ':': return static_cast<int>(BondOrder::kAromatic);
      default: return -1;
    }
  }

  void ring_closure(int digit) {
    auto it = open_rings.find(digit);
    if (it == open_rings.end()) {
      if (prev_atom < 0) {
        fail(ErrorCode::kMalformedSmiles, "ring bond before any atom");
      }
      open_rings[digit] = PendingRingBond{prev_atom, pending_order};
      pending_order = -1;
      return;
    }
    PendingRingBond open = it->second;
    open_rings.erase(it);
    int order = pending_order;
    if (order < 0) order = open.order;
    if (open.order >= 0 && pending_order >= 0 && open.order != pending_order) {
      fail(ErrorCode::kUnpairedRingBond,
           "ring closure " + std::to_string(digit) +
               " specifies conflicting bond orders");
    }
    add_bond(open.atom, prev_atom, order);
    pending_order = -1;
  }

  Atom parse_bracket_atom() {
    // '[' already consumed.
    Atom atom;
    atom.from_bracket = true;
    // Isotope: ignored.
    bool saw_isotope = false;
    while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
      take();
      saw_isotope = true;
    }
    if (saw_isotope) warn("isotope specification ignored");
    if (eof()) fail(ErrorCode::kMalformedSmiles, "unterminated bracket atom");

    // Element symbol, possibly aromatic lowercase.
    std::string symbol;
    char c = take();
    if (std::isupper(static_cast<unsigned char>(c))) {
      symbol += c;
      if (!eof() && std::islower(static_cast<unsigned char>(peek()))) {
        std::string two = symbol + peek();
        if (find_element(two)) {
          symbol = two;
          take();
        }
      }
    } else if (std::islower(static_cast<unsigned char>(c))) {
      symbol += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      if (!eof() && std::islower(static_cast<unsigned char>(peek()))) {
        std::string two = symbol + peek();
        if (find_element(two)) {
          symbol = two;
          take();
        }
      }
      atom.aromatic = true;
    } else {
      fail(ErrorCode::kMalformedSmiles,
           std::string("unexpected character '") + c + "' in bracket atom");
    }
    const ElementInfo* info = find_element(symbol);
    if (!info) fail(ErrorCode::kUnknownElement, "element '" + symbol + "'");
    if (atom.aromatic && !info->aromatic_capable) {
      fail(ErrorCode::kMalformedSmiles,
           "element '" + symbol + "' cannot be aromatic");
    }
    atom.element = symbol;

    // Chirality, H count, charge, atom class — in any sane order.
    while (!eof() && peek() != ']') {
      c = take();
      if (c == '@') {
        if (!eof() && peek() == '@') take();
        warn("stereochemistry marker '@' ignored");
      } else if (c == 'H') {
        int count = 1;
        if (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
          count = take() - '0';
        }
        atom.explicit_h = count;
      } else if (c == '+' || c == '-') {
        const int sign = c == '+' ? 1 : -1;
        int magnitude = 1;
        if (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
          magnitude = take() - '0';
        } else {
          while (!eof() && peek() == c) {
            take();
            ++magnitude;
          }
        }
        atom.formal_charge = sign * magnitude;
      } else if (c == ':') {
        while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) take();
        warn("atom class ignored");
      } else {
        fail(ErrorCode::kMalformedSmiles,
             std::string("unexpected character '") + c + "' in bracket atom");
      }
    }
    if (eof()) fail(ErrorCode::kMalformedSmiles, "unterminated bracket atom");
    take();  // ']'
    return atom;
  }

  void parse_organic_atom(char first) {
    Atom atom;
    if (std::isupper(static_cast<unsigned char>(first))) {
      std::string symbol(1, first);
      // Only Cl and Br are bare two-letter symbols.
      if ((first == 'C' || first == 'B') && !eof() &&
          (peek() == 'l' || peek() == 'r')) {
        const std::string two = symbol + peek();
        if (two == "Cl" || two == "Br") {
          symbol = two;
          take();
        }
      }
      const ElementInfo* info = find_element(symbol);
      if (!info || !info->organic_subset) {
        fail(ErrorCode::kUnknownElement,
             "element '" + symbol + "' (bracket required?)");
      }
      // Si/Se are bracket-only by the grammar; bare S already matched above.
      atom.element = symbol;
    } else {
      const char upper =
          static_cast<char>(std::toupper(static_cast<unsigned char>(first)));
      const std::string symbol(1, upper);
      const ElementInfo* info = find_element(symbol);
      if (!info || !info->aromatic_capable || !info->organic_subset) {
        fail(ErrorCode::kUnknownElement,
             std::string("aromatic element '") + first + "'");
      }
      atom.element = symbol;
      atom.aromatic = true;
    }
    attach(add_atom(std::move(atom)));
  }

  void run() {
    if (text.empty()) {
      fail(ErrorCode::kMalformedSmiles, "empty SMILES");
    }
    while (!eof()) {
      const char c = take();
      if (c == '(') {
        if (prev_atom < 0) {
          fail(ErrorCode::kUnclosedBranch, "branch before any atom");
        }
        branch_stack.push_back(prev_atom);
      } else if (c == ')') {
        if (branch_stack.empty()) {
          fail(ErrorCode::kUnclosedBranch, "unmatched ')'");
        }
        prev_atom = branch_stack.back();
        branch_stack.pop_back();
      } else if (c == '[') {
        attach(add_atom(parse_bracket_atom()));
      } else if (int order = bond_symbol(c); order >= 0) {
        if (pending_order >= 0) {
          fail(ErrorCode::kMalformedSmiles, "two bond symbols in a row");
        }
        pending_order = order;
      } else if (c == '/' || c == '\\') {
        warn("stereo bond marker ignored; treated as single bond");
        pending_order = static_cast<int>(BondOrder::kSingle);
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        if (prev_atom < 0) {
          fail(ErrorCode::kMalformedSmiles, "ring digit before any atom");
        }
        ring_closure(c - '0');
      } else if (c == '%') {
        if (pos + 1 >= text.size() ||
            !std::isdigit(static_cast<unsigned char>(text[pos])) ||
            !std::isdigit(static_cast<unsigned char>(text[pos + 1]))) {
          fail(ErrorCode::kMalformedSmiles, "'%' needs two digits");
        }
        const int digit = (take() - '0') * 10 + (take() - '0');
        if (prev_atom < 0) {
          fail(ErrorCode::kMalformedSmiles, "ring digit before any atom");
        }
        ring_closure(digit);
      } else if (c == '.') {
        if (pending_order >= 0) {
          fail(ErrorCode::kMalformedSmiles, "bond symbol before '.'");
        }
        prev_atom = -1;
        graph.multi_fragment = true;
      } else if (std::isalpha(static_cast<unsigned char>(c))) {
        parse_organic_atom(c);
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        break;  // trailing title/whitespace ends the SMILES proper
      } else {
        fail(ErrorCode::kMalformedSmiles,
             std::string("unexpected character '") + c + "'");
      }
    }
    if (!branch_stack.empty()) {
      fail(ErrorCode::kUnclosedBranch,
           std::to_string(branch_stack.size()) + " unclosed '('");
    }
    if (!open_rings.empty()) {
      fail(ErrorCode::kUnpairedRingBond,
           "ring closure " + std::to_string(open_rings.begin()->first) +
               " never paired");
    }
    if (pending_order >= 0) {
      fail(ErrorCode::kMalformedSmiles, "dangling bond symbol");
    }
    if (graph.atoms.empty()) {
      fail(ErrorCode::kMalformedSmiles, "no atoms");
    }
  }

  void assign_implicit_hydrogens() {
    std::vector<double> order_sum(graph.atom_count(), 0.0);
    for (const Bond& b : graph.bonds) {
      order_sum[b.a] += bond_order_value(b.order);
      order_sum[b.b] += bond_order_value(b.order);
    }
    for (std::size_t i = 0; i < graph.atom_count(); ++i) {
      Atom& atom = graph.atoms[i];
      if (atom.from_bracket) continue;  // bracket H count is verbatim
      const ElementInfo* info = find_element(atom.element);
      const int total = static_cast<int>(std::ceil(order_sum[i]));
      if (atom.aromatic) {
        // Lowercase notation: fill up to the lowest normal valence, never
        // promoting to a hypervalent state. Benzene carbon (sum 3.0) gets one
        // hydrogen; pyridine n, furan o and thiophene s get none.
        atom.explicit_h = std::max(0, info->default_valences.front() - total);
        continue;
      }
      int chosen = -1;
      for (int v : info->default_valences) {
        if (v >= total) {
          chosen = v;
          break;
        }
      }
      if (chosen < 0) {
        if (opts.strict_valence) {
          raise(ErrorCode::kValenceViolation,
                atom.element + " with bond order sum " + std::to_string(total) +
                    " in '" + graph.smiles_source + "'");
        }
        warn("valence violation on atom " + std::to_string(i) + " (" +
             atom.element + ", bond order sum " + std::to_string(total) +
             "); accepted with no implicit hydrogens");
        atom.explicit_h = 0;
        continue;
      }
      atom.explicit_h = chosen - total;
    }
  }

  void check_aromatic_flags() {
    for (std::size_t i = 0; i < graph.atom_count(); ++i) {
      if (graph.atoms[i].aromatic && !graph.atoms[i].in_ring) {
        fail(ErrorCode::kMalformedSmiles,
             "aromatic atom " + std::to_string(i) + " is not in a ring");
      }
    }
  }
};

}  // namespace

MolGraph parse_smiles(std::string_view text, const ParseOptions& opts) {
  Parser parser(text, opts);
  parser.run();
  perceive_rings(parser.graph);
  parser.check_aromatic_flags();
  parser.assign_implicit_hydrogens();
  parser.graph.multi_fragment = component_count(parser.graph) > 1;
  return std::move(parser.graph);
}

}  // namespace ibio::chem

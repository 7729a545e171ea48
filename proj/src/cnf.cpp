#include "satgrad/cnf.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace satgrad {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' ||
         c == '\f';
}

}  // namespace

CnfFormula parse_dimacs(const std::string& text,
                        std::vector<std::string>* warnings) {
  CnfFormula cnf;
  bool saw_header = false;
  int declared_clauses = 0;
  Clause current;
  bool clause_open = false;

  size_t i = 0;
  const size_t n = text.size();
  size_t line_no = 1;

  auto fail = [&](const std::string& msg) {
    throw ParseError("line " + std::to_string(line_no) + ": " + msg);
  };

  auto end_clause = [&]() {
    if (current.empty()) fail("empty clause");
    // Drop exact duplicate literals, keep first occurrences in order.
    Clause dedup;
    for (const Literal& l : current) {
      if (std::find(dedup.begin(), dedup.end(), l) == dedup.end())
        dedup.push_back(l);
    }
    cnf.clauses.push_back(std::move(dedup));
    current.clear();
    clause_open = false;
  };

  while (i < n) {
    if (text[i] == '\n') {
      ++line_no;
      ++i;
      continue;
    }
    if (is_space(text[i])) {
      ++i;
      continue;
    }
    if (text[i] == 'c' && (i + 1 >= n || is_space(text[i + 1]))) {
      size_t eol = text.find('\n', i);
      if (eol == std::string::npos) eol = n;
      size_t start = i + 1;
      if (start < eol && text[start] == ' ') ++start;
      cnf.comments.push_back(text.substr(start, eol - start));
      i = eol;
      continue;
    }
    if (text[i] == 'p') {
      if (saw_header) fail("duplicate header");
      if (clause_open) fail("header inside a clause");
      size_t eol = text.find('\n', i);
      if (eol == std::string::npos) eol = n;
      std::istringstream hs(text.substr(i, eol - i));
      std::string p, fmt;
      if (!(hs >> p >> fmt >> cnf.num_vars >> declared_clauses) ||
          fmt != "cnf" || cnf.num_vars < 0 || declared_clauses < 0) {
        fail("malformed header");
      }
      saw_header = true;
      i = eol;
      continue;
    }
    // Integer token.
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + n, value);
    if (ec != std::errc() || (ptr != text.data() + n && !is_space(*ptr)))
      fail(std::string("unexpected token '") + text[i] + "'");
    i = static_cast<size_t>(ptr - text.data());
    if (!saw_header) fail("clause data before header");
    if (value == 0) {
      end_clause();
    } else {
      int var = value < 0 ? -value : value;
      if (var > cnf.num_vars)
        fail("literal " + std::to_string(value) + " exceeds declared " +
             std::to_string(cnf.num_vars) + " variables");
      current.push_back(from_dimacs(value));
      clause_open = true;
    }
  }

  if (clause_open) throw ParseError("clause not 0-terminated at end of input");
  if (!saw_header) throw ParseError("missing 'p cnf' header");
  if (static_cast<int>(cnf.clauses.size()) != declared_clauses && warnings) {
    warnings->push_back("header declares " + std::to_string(declared_clauses) +
                        " clauses, found " +
                        std::to_string(cnf.clauses.size()));
  }
  return cnf;
}

std::string write_dimacs(const CnfFormula& cnf) {
  std::string out;
  for (const std::string& c : cnf.comments) {
    out += "c ";
    out += c;
    out += '\n';
  }
  out += "p cnf " + std::to_string(cnf.num_vars) + ' ' +
         std::to_string(cnf.clauses.size()) + '\n';
  for (const Clause& cl : cnf.clauses) {
    for (const Literal& l : cl) {
      out += std::to_string(to_dimacs(l));
      out += ' ';
    }
    out += "0\n";
  }
  return out;
}

bool eval_cnf(const CnfFormula& cnf, const Assignment& a) {
  auto value = [&](int var) -> bool {
    if (var <= 0 || static_cast<size_t>(var) >= a.size() || a[var] > 1)
      throw std::invalid_argument("variable " + std::to_string(var) +
                                  " is unassigned");
    return a[var] != 0;
  };
  for (const Clause& cl : cnf.clauses) {
    bool sat = false;
    for (const Literal& l : cl) {
      if (value(l.var) != l.negated) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

}  // namespace satgrad

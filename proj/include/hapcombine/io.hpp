#pragma once

// Text formats.
//
// Haplotype files: records of a `>ID` header followed by two allele lines of
// equal length over {0,1}. Blank lines are ignored.
//
// Genotype files: one `ID<TAB>tokens` line per individual, tokens separated by
// spaces and drawn from {0,1,2,?} (count of allele 1; ? for a missing call).

#include <cstddef>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

#include "hapcombine/core.hpp"
#include "hapcombine/error.hpp"
#include "hapcombine/evaluate.hpp"

namespace hapcombine::io {

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

inline std::ifstream open(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::InvalidArgument, "cannot open '" + path + "'");
  return in;
}

}  // namespace detail

inline PairMap read_haplotypes(std::istream& in, const std::string& name = "<input>") {
  PairMap out;
  std::string line, id;
  Haplotype first;
  std::size_t lineno = 0, header_line = 0;
  int expect = 0;  // 0: header, 1: first allele line, 2: second allele line

  auto parse_alleles = [&](std::string_view s) {
    Haplotype h;
    h.reserve(s.size());
    for (char c : s) {
      if (c != '0' && c != '1') {
        throw ParseError(name, lineno, std::string("invalid allele '") + c + "'");
      }
      h.push_back(static_cast<Allele>(c - '0'));
    }
    return h;
  };

  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view s = detail::trim(line);
    if (s.empty()) continue;
    if (expect == 0) {
      if (s.front() != '>') throw ParseError(name, lineno, "expected '>ID' header");
      id = std::string(detail::trim(s.substr(1)));
      if (id.empty()) throw ParseError(name, lineno, "empty individual id");
      if (out.count(id) != 0) {
        throw Error(Errc::DuplicateId,
                    name + ":" + std::to_string(lineno) + ": duplicate id '" + id + "'");
      }
      header_line = lineno;
      expect = 1;
    } else if (expect == 1) {
      first = parse_alleles(s);
      if (first.empty()) throw ParseError(name, lineno, "empty haplotype");
      expect = 2;
    } else {
      Haplotype second = parse_alleles(s);
      if (second.size() != first.size()) {
        throw ParseError(name, lineno,
                         "length mismatch: " + std::to_string(first.size()) + " vs " +
                             std::to_string(second.size()));
      }
      out.emplace(id, HaplotypePair(std::move(first), std::move(second)));
      first.clear();
      expect = 0;
    }
  }
  if (expect != 0) {
    throw ParseError(name, header_line, "record '" + id + "' is missing an allele line");
  }
  return out;
}

inline PairMap parse_haplotype_file(const std::string& path) {
  auto in = detail::open(path);
  return read_haplotypes(in, path);
}

inline void write_haplotypes(std::ostream& out, const PairMap& pairs) {
  std::string buf;
  for (const auto& [id, p] : pairs) {
    buf.clear();
    buf += '>';
    buf += id;
    buf += '\n';
    for (Allele a : p.h1()) buf += static_cast<char>('0' + a);
    buf += '\n';
    for (Allele a : p.h2()) buf += static_cast<char>('0' + a);
    buf += '\n';
    out << buf;
  }
}

inline GenotypeMap read_genotypes(std::istream& in, const std::string& name = "<input>") {
  GenotypeMap out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view s = detail::trim(line);
    if (s.empty()) continue;
    const auto tab = s.find('\t');
    if (tab == std::string_view::npos) throw ParseError(name, lineno, "expected 'ID<TAB>calls'");
    std::string id(detail::trim(s.substr(0, tab)));
    if (id.empty()) throw ParseError(name, lineno, "empty individual id");
    if (out.count(id) != 0) {
      throw Error(Errc::DuplicateId,
                  name + ":" + std::to_string(lineno) + ": duplicate id '" + id + "'");
    }
    std::vector<Call> calls;
    std::istringstream tokens{std::string(s.substr(tab + 1))};
    std::string tok;
    while (tokens >> tok) {
      if (tok == "0") {
        calls.push_back(Call::Hom0);
      } else if (tok == "1") {
        calls.push_back(Call::Het);
      } else if (tok == "2") {
        calls.push_back(Call::Hom1);
      } else if (tok == "?") {
        calls.push_back(Call::Missing);
      } else {
        throw ParseError(name, lineno, "invalid genotype token '" + tok + "'");
      }
    }
    if (calls.empty()) throw ParseError(name, lineno, "no genotype calls");
    out.emplace(id, Genotype(id, std::move(calls)));
  }
  return out;
}

inline GenotypeMap parse_genotype_file(const std::string& path) {
  auto in = detail::open(path);
  return read_genotypes(in, path);
}

inline void write_genotypes(std::ostream& out, const GenotypeMap& genotypes) {
  std::string buf;
  for (const auto& [id, g] : genotypes) {
    buf.clear();
    buf += id;
    buf += '\t';
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (i != 0) buf += ' ';
      switch (g.calls()[i]) {
        case Call::Hom0: buf += '0'; break;
        case Call::Het: buf += '1'; break;
        case Call::Hom1: buf += '2'; break;
        case Call::Missing: buf += '?'; break;
      }
    }
    buf += '\n';
    out << buf;
  }
}

}  // namespace hapcombine::io

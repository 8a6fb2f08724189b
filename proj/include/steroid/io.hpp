#pragma once

#include <charconv>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include "steroid/decompose.hpp"
#include "steroid/errors.hpp"
#include "steroid/indexing.hpp"
#include "steroid/symtensor.hpp"

namespace steroid {

/// Text formats.
///
/// Tensor file:
///   symtensor <order> <dim>
///   <i_1> ... <i_order> <value>     one orbit per line, 1-based indices
/// Omitted orbits are zero. The writer emits each index sorted
/// non-increasingly and skips exact zeros. Alternative body: a single line
/// `dense` followed by dim^order whitespace-separated values in
/// first-index-fastest order.
///
/// Decomposition file:
///   steroid-decomposition <order> <dim> <terms>
///   <lambda> <v_1> ... <v_dim>      one term per line
///   residual <value>
///
/// All numbers are written with max_digits10 significant digits (17 for
/// double), so write/read round-trips are exact and byte-stable.

namespace detail {

template <std::floating_point T>
std::string format_number(T value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value,
                                 std::chars_format::general,
                                 std::numeric_limits<T>::max_digits10);
  return std::string(buf, res.ptr);
}

inline std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) tokens.push_back(tok);
  return tokens;
}

template <std::floating_point T>
T parse_number(const std::string& tok, long line_no) {
  T value{};
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
    throw ParseError("expected a number, got '" + tok + "'", line_no);
  if (!std::isfinite(value))
    throw ParseError("non-finite value '" + tok + "'", line_no);
  return value;
}

inline long long parse_integer(const std::string& tok, long line_no) {
  long long value{};
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
    throw ParseError("expected an integer, got '" + tok + "'", line_no);
  return value;
}

/// Reads lines, tracking 1-based line numbers; skips blank lines.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::vector<std::string>& tokens) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      tokens = tokenize(line);
      if (!tokens.empty()) return true;
    }
    return false;
  }

  long line() const noexcept { return line_no_; }

 private:
  std::istream& in_;
  long line_no_ = 0;
};

}  // namespace detail

template <std::floating_point T>
void write_tensor(std::ostream& out, const SymTensor<T>& t) {
  out << "symtensor " << t.order() << " " << t.dim() << "\n";
  const OrbitTable table(t.order(), t.dim());
  for (std::size_t o = 0; o < table.count(); ++o) {
    const std::vector<int>& rep = table.rep(o);
    const T value = t.data()[linear_index(rep, t.dim())];
    if (value == T(0)) continue;
    std::string line;
    for (int ik : rep) {
      line += std::to_string(ik);
      line += ' ';
    }
    line += detail::format_number(value);
    out << line << "\n";
  }
}

template <std::floating_point T = double>
SymTensor<T> read_tensor(std::istream& in, T sym_tol = default_sym_tol<T>) {
  detail::LineReader reader(in);
  std::vector<std::string> tokens;
  if (!reader.next(tokens)) throw ParseError("empty input, expected a tensor header");
  if (tokens.size() != 3 || tokens[0] != "symtensor")
    throw ParseError("expected header 'symtensor <order> <dim>'", reader.line());
  const long long order = detail::parse_integer(tokens[1], reader.line());
  const long long dim = detail::parse_integer(tokens[2], reader.line());
  if (order < 1 || order > 64)
    throw ParseError("order " + std::to_string(order) + " out of range", reader.line());
  if (dim < 1 || dim > 1000000)
    throw ParseError("dimension " + std::to_string(dim) + " out of range", reader.line());
  const int d = static_cast<int>(order);
  const int n = static_cast<int>(dim);
  const std::size_t size = checked_pow(n, d);  // validates representability

  bool first_body_line = true;
  std::vector<std::pair<std::vector<int>, T>> entries;
  while (reader.next(tokens)) {
    if (first_body_line && tokens.size() == 1 && tokens[0] == "dense") {
      std::vector<T> data;
      data.reserve(size);
      while (reader.next(tokens))
        for (const std::string& tok : tokens)
          data.push_back(detail::parse_number<T>(tok, reader.line()));
      if (data.size() != size)
        throw ParseError("dense body has " + std::to_string(data.size()) +
                         " values, expected " + std::to_string(size));
      return SymTensor<T>::from_dense(d, n, std::move(data), sym_tol);
    }
    first_body_line = false;
    if (tokens.size() != static_cast<std::size_t>(d) + 1)
      throw ParseError("expected " + std::to_string(d) + " indices and a value, got " +
                       std::to_string(tokens.size()) + " fields", reader.line());
    std::vector<int> idx(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) {
      const long long ik = detail::parse_integer(tokens[static_cast<std::size_t>(k)],
                                                 reader.line());
      if (ik < 1 || ik > n)
        throw ParseError("index " + std::to_string(ik) + " outside [1, " +
                         std::to_string(n) + "]", reader.line());
      idx[static_cast<std::size_t>(k)] = static_cast<int>(ik);
    }
    entries.emplace_back(std::move(idx),
                         detail::parse_number<T>(tokens.back(), reader.line()));
  }
  return SymTensor<T>::from_orbits(d, n, entries);
}

template <std::floating_point T>
void write_decomposition(std::ostream& out, const Decomposition<T>& dec) {
  out << "steroid-decomposition " << dec.order << " " << dec.dim << " "
      << dec.terms.size() << "\n";
  for (const auto& term : dec.terms) {
    std::string line = detail::format_number(term.lambda);
    for (const T& c : term.v) {
      line += ' ';
      line += detail::format_number(c);
    }
    out << line << "\n";
  }
  out << "residual " << detail::format_number(dec.residual_norm) << "\n";
}

template <std::floating_point T = double>
Decomposition<T> read_decomposition(std::istream& in) {
  detail::LineReader reader(in);
  std::vector<std::string> tokens;
  if (!reader.next(tokens))
    throw ParseError("empty input, expected a decomposition header");
  if (tokens.size() != 4 || tokens[0] != "steroid-decomposition")
    throw ParseError("expected header 'steroid-decomposition <order> <dim> <terms>'",
                     reader.line());
  const long long order = detail::parse_integer(tokens[1], reader.line());
  const long long dim = detail::parse_integer(tokens[2], reader.line());
  const long long count = detail::parse_integer(tokens[3], reader.line());
  if (order < 1 || order > 64)
    throw ParseError("order " + std::to_string(order) + " out of range", reader.line());
  if (dim < 1 || dim > 1000000)
    throw ParseError("dimension " + std::to_string(dim) + " out of range", reader.line());
  if (count < 0) throw ParseError("negative term count", reader.line());

  Decomposition<T> dec;
  dec.order = static_cast<int>(order);
  dec.dim = static_cast<int>(dim);
  for (long long r = 0; r < count; ++r) {
    if (!reader.next(tokens))
      throw ParseError("expected " + std::to_string(count) + " terms, got " +
                       std::to_string(r));
    if (tokens.size() != static_cast<std::size_t>(dim) + 1)
      throw ParseError("expected a coefficient and " + std::to_string(dim) +
                       " components, got " + std::to_string(tokens.size()) +
                       " fields", reader.line());
    Term<T> term;
    term.lambda = detail::parse_number<T>(tokens[0], reader.line());
    term.v.resize(static_cast<std::size_t>(dim));
    for (long long k = 0; k < dim; ++k)
      term.v[static_cast<std::size_t>(k)] =
          detail::parse_number<T>(tokens[static_cast<std::size_t>(k) + 1], reader.line());
    dec.terms.push_back(std::move(term));
  }
  if (!reader.next(tokens) || tokens.size() != 2 || tokens[0] != "residual")
    throw ParseError("expected trailer 'residual <value>'", reader.line());
  dec.residual_norm = detail::parse_number<T>(tokens[1], reader.line());
  return dec;
}

// Path convenience wrappers.

template <std::floating_point T = double>
SymTensor<T> read_tensor_file(const std::string& path, T sym_tol = default_sym_tol<T>) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "' for reading");
  return read_tensor<T>(in, sym_tol);
}

template <std::floating_point T>
void write_tensor_file(const std::string& path, const SymTensor<T>& t) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write_tensor(out, t);
  out.flush();
  if (!out) throw Error("write to '" + path + "' failed");
}

template <std::floating_point T = double>
Decomposition<T> read_decomposition_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "' for reading");
  return read_decomposition<T>(in);
}

template <std::floating_point T>
void write_decomposition_file(const std::string& path, const Decomposition<T>& dec) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write_decomposition(out, dec);
  out.flush();
  if (!out) throw Error("write to '" + path + "' failed");
}

}  // namespace steroid

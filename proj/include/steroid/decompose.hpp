#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "steroid/eig.hpp"
#include "steroid/errors.hpp"
#include "steroid/indexing.hpp"
#include "steroid/lstsq.hpp"
#include "steroid/matrix.hpp"
#include "steroid/symtensor.hpp"

namespace steroid {

/// Number of monomials of total degree `order` in `dim` variables,
/// C(order + dim - 1, dim - 1). The column space of any matrix of symmetric
/// rank-1 Kronecker powers lies inside a space of this dimension, so it also
/// bounds the numerical rank reachable by the fit.
inline long long r_max(int order, int dim) {
  if (order < 0) throw RangeError("r_max: negative order");
  if (dim < 1) throw RangeError("r_max: dimension must be positive");
  const long long nn = static_cast<long long>(order) + dim - 1;
  const long long k = std::min<long long>(dim - 1, order);
  unsigned __int128 acc = 1;
  for (long long i = 1; i <= k; ++i) {
    const unsigned __int128 mul = static_cast<unsigned __int128>(nn - k + i);
    if (acc > (static_cast<unsigned __int128>(1) << 126) / (mul ? mul : 1))
      throw RangeError("r_max overflows");
    acc = acc * mul / static_cast<unsigned __int128>(i);
  }
  if (acc > static_cast<unsigned __int128>(std::numeric_limits<long long>::max()))
    throw RangeError("r_max overflows long long");
  return static_cast<long long>(acc);
}

/// A harvested pure power: a unit vector together with the recursion path
/// that produced it, as (level, eigenvalue) pairs from the top split down.
template <std::floating_point T>
struct PurePower {
  std::vector<T> v;
  std::vector<std::pair<int, T>> chain;
};

template <std::floating_point T>
struct PurePowerSet {
  int source_order = 0;  ///< order of the harvested tensor (a power of two)
  int dim = 0;
  std::vector<PurePower<T>> items;
};

namespace detail {

template <std::floating_point T>
std::string format_chain(const std::vector<std::pair<int, T>>& chain) {
  std::string s = "[";
  for (std::size_t i = 0; i < chain.size(); ++i) {
    if (i) s += ", ";
    s += "level " + std::to_string(chain[i].first) + ": " +
         std::to_string(chain[i].second);
  }
  return s + "]";
}

template <std::floating_point T>
void harvest_recurse(const std::vector<T>& vec, int dim, int level,
                     std::vector<std::pair<int, T>>& chain,
                     std::optional<T> zero_tol,
                     std::vector<PurePower<T>>& out) {
  Matrix<T> a = reshape_square(vec);
  if (level > 0) {
    // An eigenvector of a symmetric unfolding reshapes to a symmetric matrix
    // whenever its eigenvalue carries signal; a reshape the eigensolver would
    // reject as asymmetric can only come from null-space noise around a
    // near-zero eigenvalue. Prune the branch: its energy stays in the tail
    // and is re-harvested on the next pass.
    T max_abs = 0, asym = 0;
    for (const T& x : a.data()) max_abs = std::max(max_abs, std::abs(x));
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t i = j + 1; i < a.rows(); ++i)
        asym = std::max(asym, std::abs(a(i, j) - a(j, i)));
    if (asym > T(1e-8) * std::max(T(1), max_abs)) return;
  }
  EigResult<T> eig;
  try {
    eig = sym_eig(a);
  } catch (const Error& err) {
    throw NumericError(std::string(err.what()) + " (harvest level " +
                       std::to_string(level) + ", eigenvalue chain " +
                       format_chain(chain) + ")");
  }
  const T tol = zero_tol ? *zero_tol : eig.zero_tol;
  const std::size_t m = a.rows();
  for (std::size_t i = 0; i < m; ++i) {
    const T lambda = eig.eigenvalues[i];
    if (std::abs(lambda) <= tol) continue;
    std::vector<T> v = eig.eigenvectors.col(i);
    chain.emplace_back(level, lambda);
    if (v.size() == static_cast<std::size_t>(dim))
      out.push_back(PurePower<T>{std::move(v), chain});
    else
      harvest_recurse(v, dim, level + 1, chain, zero_tol, out);
    chain.pop_back();
  }
}

template <std::floating_point T>
std::vector<PurePower<T>> harvest_dense(const std::vector<T>& dense, int dim,
                                        std::optional<T> zero_tol) {
  std::vector<PurePower<T>> out;
  std::vector<std::pair<int, T>> chain;
  harvest_recurse(dense, dim, 0, chain, zero_tol, out);
  return out;
}

/// Product of v over a 1-based index tuple.
template <std::floating_point T>
T index_product(const std::vector<T>& v, const std::vector<int>& rep) {
  T p = 1;
  for (int ik : rep) p *= v[static_cast<std::size_t>(ik - 1)];
  return p;
}

template <std::floating_point T>
bool same_direction(const std::vector<T>& a, const std::vector<T>& b, T dedup_tol) {
  T d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] * b[i];
  return std::abs(d) >= T(1) - dedup_tol;
}

/// Accumulate coef * v^(kron order) into out (length dim^order), first index
/// fastest. tmp provides scratch of at least dim^(order-1).
template <std::floating_point T>
void accumulate_kron_power(const std::vector<T>& v, int order, T coef,
                           std::vector<T>& out, std::vector<T>& tmp) {
  const std::size_t n = v.size();
  if (order == 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] += coef * v[i];
    return;
  }
  std::size_t len = n;
  std::copy(v.begin(), v.end(), tmp.begin());
  for (int k = 2; k < order; ++k) {
    // grow in place from the back: tmp[0..len) -> tmp[0..len*n)
    for (std::size_t b = n; b-- > 0;)
      for (std::size_t a = len; a-- > 0;) tmp[a + len * b] = tmp[a] * v[b];
    len *= n;
  }
  for (std::size_t b = 0; b < n; ++b) {
    const T c = coef * v[b];
    for (std::size_t a = 0; a < len; ++a) out[a + len * b] += c * tmp[a];
  }
}

}  // namespace detail

/// Recursive eigendecomposition of a power-of-two-order symmetric tensor into
/// unit pure powers: reshape to the square unfolding, eigendecompose, recurse
/// on every eigenvector whose eigenvalue is not numerically zero, stop when
/// eigenvectors reach length dim. Results are deduplicated up to sign in
/// provenance order (first occurrence kept).
///
/// zero_tol, when given, is an absolute eigenvalue threshold applied at every
/// recursion level; by default each level uses its own m * eps * max|lambda|.
template <std::floating_point T>
PurePowerSet<T> harvest_pure_powers(const SymTensor<T>& t,
                                    std::optional<T> zero_tol = {},
                                    T dedup_tol = T(1e-10)) {
  const int d = t.order();
  if (d < 2 || (d & (d - 1)) != 0)
    throw ShapeError("harvest_pure_powers: order " + std::to_string(d) +
                     " is not a power of two >= 2; embed() first");
  PurePowerSet<T> out;
  out.source_order = d;
  out.dim = t.dim();
  std::vector<PurePower<T>> raw = detail::harvest_dense(t.data(), t.dim(), zero_tol);
  for (auto& pp : raw) {
    bool dup = false;
    for (const auto& kept : out.items)
      if (detail::same_direction(kept.v, pp.v, dedup_tol)) {
        dup = true;
        break;
      }
    if (!dup) out.items.push_back(std::move(pp));
  }
  return out;
}

/// Full fitting matrix: column j is the `order`-fold Kronecker power of
/// pure power j, a vector of length dim^order with unit norm.
template <std::floating_point T>
Matrix<T> build_x(const PurePowerSet<T>& pp, int order) {
  if (order < 1) throw RangeError("build_x: order must be positive");
  const std::size_t rows = checked_pow(pp.dim, order);
  Matrix<T> x(rows, pp.items.size());
  std::vector<T> tmp(rows);
  std::vector<T> col(rows);
  for (std::size_t j = 0; j < pp.items.size(); ++j) {
    std::fill(col.begin(), col.end(), T(0));
    detail::accumulate_kron_power(pp.items[j].v, order, T(1), col, tmp);
    for (std::size_t i = 0; i < rows; ++i) x(i, j) = col[i];
  }
  return x;
}

enum class HeadMode {
  ls,           ///< head = unvectorize(X lhat) from the least-squares fit
  eigenproduct  ///< head = sum over fresh leaves of (prod eigenvalues^(2^level)) v^od
};

template <std::floating_point T>
struct DecomposeOptions {
  T tau = T(1e-10);           ///< converged when residual <= tau * max(1, ||t||_F)
  int max_tail_iters = 10;    ///< tail rounds after the initial harvest + fit
  std::optional<T> zero_tol;  ///< absolute eigenvalue zero threshold override
  std::optional<T> rank_tol;  ///< least-squares rank threshold override
  T dedup_tol = T(1e-10);     ///< pure powers with |<u,w>| >= 1 - dedup_tol collapse
  HeadMode head = HeadMode::ls;
};

template <std::floating_point T>
struct IterationRecord {
  int iteration = 0;  ///< 0 is the initial pass
  std::size_t new_pure_powers = 0;
  std::size_t columns = 0;
  std::size_t numerical_rank = 0;
  T residual = 0;       ///< ||vec(t) - X lhat|| of this pass's fit
  T head_symmetry = 0;  ///< relative orbit spread of unvectorize(X lhat)
  double seconds = 0;
};

template <std::floating_point T>
struct DecomposeReport {
  long long rank_bound = 0;  ///< r_max(order, dim)
  std::vector<IterationRecord<T>> iterations;
};

template <std::floating_point T>
struct Term {
  T lambda;
  std::vector<T> v;  ///< unit norm
};

/// t ~ sum_j lambda_j v_j^o(order), v_j unit, lambda_j real.
template <std::floating_point T>
struct Decomposition {
  int order = 0;
  int dim = 0;
  std::vector<Term<T>> terms;
  T residual_norm = 0;  ///< ||vec(t) - sum_j lambda_j v_j^(x)order||, from kept terms
  int tail_iterations = 0;
  bool converged = false;
  DecomposeReport<T> report;
};

/// Decompose a symmetric tensor into a real linear combination of symmetric
/// unit rank-1 terms.
///
/// Each pass embeds the current tail into the nearest power-of-two order,
/// harvests pure powers recursively, appends the new directions to the pool,
/// and solves one minimum-norm least-squares fit of the original tensor
/// against all pooled Kronecker power columns (the fit is always at the
/// original order). The tail for the next pass is t minus the pass's head.
///
/// The fit is solved in orbit-compressed form: rows of the full dim^order
/// system are constant on permutation orbits, so the weighted system over
/// orbit representatives (weights = orbit sizes) has the same minimizer,
/// minimum-norm tie-break, residual, and numerical rank at a fraction of the
/// cost. Tests cross-check this against the full build_x route.
///
/// Stops when the residual reaches tau * max(1, ||t||_F) (converged), when
/// max_tail_iters tail rounds have run, when a tail harvest adds no new
/// direction, or when the fit has hit the monomial rank bound and the
/// residual improved by less than a factor of 1e-3 (stagnation). An
/// unconverged run still returns the best decomposition found, with
/// converged = false.
template <std::floating_point T>
Decomposition<T> decompose(const SymTensor<T>& t,
                           const DecomposeOptions<T>& opts = {}) {
  const int d = t.order();
  const int n = t.dim();
  {
    const SymmetryCheck<T> c = symmetry_check(t.data(), d, n);
    if (c.violation > default_sym_tol<T> * std::max(T(1), c.max_abs))
      throw SymmetryError("decompose: input not symmetric: entries at " +
                          detail::format_index(c.index_a) + " and " +
                          detail::format_index(c.index_b) + " differ by " +
                          std::to_string(c.violation));
  }

  Decomposition<T> dec;
  dec.order = d;
  dec.dim = n;
  dec.report.rank_bound = r_max(d, n);
  const T normt = frobenius_norm(t);
  const T stop = opts.tau * std::max(T(1), normt);

  if (d == 1) {
    // a vector is its own decomposition: one unit term
    const auto start = std::chrono::steady_clock::now();
    std::vector<T> v = t.data();
    const T nv = norm2(v);
    if (nv > T(0)) {
      T lambda = nv;
      for (auto& c : v) c /= nv;
      std::size_t arg = 0;
      for (std::size_t i = 1; i < v.size(); ++i)
        if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
      if (v[arg] < T(0)) {
        for (auto& c : v) c = -c;
        lambda = -lambda;
      }
      dec.terms.push_back(Term<T>{lambda, std::move(v)});
    }
    dec.residual_norm = T(0);
    dec.converged = true;
    const double secs = std::chrono::duration<double>(
        std::chrono::steady_clock::now() - start).count();
    dec.report.iterations.push_back(
        IterationRecord<T>{0, dec.terms.size(), dec.terms.size(),
                           dec.terms.size(), T(0), T(0), secs});
    return dec;
  }

  const int e = embedded_order(d);
  const OrbitTable table_d(d, n);
  const std::size_t norb = table_d.count();
  std::optional<OrbitTable> table_e;
  if (e != d) table_e.emplace(e, n);

  std::vector<T> t_orb(norb), sqw(norb), b_c(norb);
  for (std::size_t o = 0; o < norb; ++o) {
    t_orb[o] = t.data()[linear_index(table_d.rep(o), n)];
    sqw[o] = std::sqrt(static_cast<T>(table_d.weight(o)));
    b_c[o] = sqw[o] * t_orb[o];
  }

  const std::size_t dense_size = checked_pow(n, d);
  std::vector<T> head(dense_size), tmp(dense_size);
  std::vector<PurePower<T>> cols;
  std::vector<T> lhat;
  std::vector<T> tail_orb = t_orb;
  T prev_residual = T(-1);
  std::size_t rank = 0;
  int pass = 0;
  bool converged = false;

  while (true) {
    const auto start = std::chrono::steady_clock::now();

    // harvest the embedded tail
    std::vector<T> dense_tail;
    if (table_e) {
      std::vector<T> evals(table_e->count(), T(0));
      std::vector<int> padded(static_cast<std::size_t>(e), 1);
      for (std::size_t o = 0; o < norb; ++o) {
        const std::vector<int>& rep = table_d.rep(o);
        std::copy(rep.begin(), rep.end(), padded.begin());
        evals[static_cast<std::size_t>(table_e->orbit_of(linear_index(padded, n)))] =
            tail_orb[o];
      }
      dense_tail.resize(checked_pow(n, e));
      for (std::size_t l = 0; l < dense_tail.size(); ++l)
        dense_tail[l] = evals[static_cast<std::size_t>(table_e->orbit_of(l))];
    } else {
      dense_tail.resize(dense_size);
      for (std::size_t l = 0; l < dense_size; ++l)
        dense_tail[l] = tail_orb[static_cast<std::size_t>(table_d.orbit_of(l))];
    }
    std::vector<PurePower<T>> fresh =
        detail::harvest_dense(dense_tail, n, opts.zero_tol);

    // pool new directions, earliest occurrence wins
    std::size_t added = 0;
    for (auto& pp : fresh) {
      bool dup = false;
      for (const auto& kept : cols)
        if (detail::same_direction(kept.v, pp.v, opts.dedup_tol)) {
          dup = true;
          break;
        }
      if (!dup) {
        cols.push_back(pp);
        ++added;
      }
    }
    if (pass > 0 && added == 0) break;  // nothing new; the previous fit stands

    // orbit-compressed weighted fit at the original order
    Matrix<T> xc(norb, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
      for (std::size_t o = 0; o < norb; ++o)
        xc(o, j) = sqw[o] * detail::index_product(cols[j].v, table_d.rep(o));
    LsqResult<T> fit = lstsq(xc, b_c, opts.rank_tol);
    lhat = fit.solution;
    rank = fit.numerical_rank;

    // dense head = unvectorize(X lhat)
    std::fill(head.begin(), head.end(), T(0));
    for (std::size_t j = 0; j < cols.size(); ++j)
      if (lhat[j] != T(0))
        detail::accumulate_kron_power(cols[j].v, d, lhat[j], head, tmp);
    const SymmetryCheck<T> hc = symmetry_check(head, d, n);
    const T head_rel = hc.violation / std::max(T(1), hc.max_abs);

    const double secs = std::chrono::duration<double>(
        std::chrono::steady_clock::now() - start).count();
    dec.report.iterations.push_back(IterationRecord<T>{
        pass, added, cols.size(), rank, fit.residual_norm, head_rel, secs});

    if (fit.residual_norm <= stop) {
      converged = true;
      break;
    }
    if (pass >= opts.max_tail_iters) break;
    if (static_cast<long long>(rank) >= dec.report.rank_bound &&
        prev_residual >= T(0) &&
        prev_residual - fit.residual_norm < T(1e-3) * prev_residual)
      break;  // rank ceiling reached and the fit has stagnated
    prev_residual = fit.residual_norm;

    // tail for the next pass
    if (opts.head == HeadMode::ls) {
      for (std::size_t o = 0; o < norb; ++o)
        tail_orb[o] = t_orb[o] - head[linear_index(table_d.rep(o), n)];
    } else {
      // eigenproduct head: every fresh leaf contributes the product of its
      // chain eigenvalues to the powers 2^level; at embedded orders the
      // order-e term restricted to the original block carries v1^(e-d)
      for (const auto& pp : fresh) {
        T coef = 1;
        for (const auto& [level, lambda] : pp.chain) {
          T p = lambda;
          for (int s = 0; s < level; ++s) p *= p;
          coef *= p;
        }
        for (int s = 0; s < e - d; ++s) coef *= pp.v[0];
        if (coef == T(0)) continue;
        for (std::size_t o = 0; o < norb; ++o)
          tail_orb[o] -= coef * detail::index_product(pp.v, table_d.rep(o));
      }
    }
    ++pass;
  }

  dec.tail_iterations = pass;
  dec.converged = converged;

  // keep terms whose coefficient survives the relative threshold
  T lmax = 0;
  for (const T& l : lhat) lmax = std::max(lmax, std::abs(l));
  for (std::size_t j = 0; j < lhat.size(); ++j)
    if (std::abs(lhat[j]) > T(1e-12) * lmax && lhat[j] != T(0))
      dec.terms.push_back(Term<T>{lhat[j], cols[j].v});

  // residual of what is actually returned
  std::fill(head.begin(), head.end(), T(0));
  for (const auto& term : dec.terms)
    detail::accumulate_kron_power(term.v, d, term.lambda, head, tmp);
  T rn = 0;
  for (std::size_t l = 0; l < dense_size; ++l) {
    const T diff = t.data()[l] - head[l];
    rn += diff * diff;
  }
  dec.residual_norm = std::sqrt(rn);
  return dec;
}

/// Sum of the decomposition's rank-1 terms, built orbit-wise so the result is
/// exactly symmetric.
template <std::floating_point T>
SymTensor<T> reconstruct(const Decomposition<T>& dec) {
  if (dec.order < 1) throw ShapeError("reconstruct: empty decomposition shape");
  for (const auto& term : dec.terms)
    if (term.v.size() != static_cast<std::size_t>(dec.dim))
      throw ShapeError("reconstruct: term vector length " +
                       std::to_string(term.v.size()) + " does not match dimension " +
                       std::to_string(dec.dim));
  const OrbitTable table(dec.order, dec.dim);
  std::vector<T> orbit_value(table.count(), T(0));
  for (std::size_t o = 0; o < table.count(); ++o) {
    T s = 0;
    for (const auto& term : dec.terms)
      s += term.lambda * detail::index_product(term.v, table.rep(o));
    orbit_value[o] = s;
  }
  const std::size_t size = checked_pow(dec.dim, dec.order);
  std::vector<T> data(size);
  for (std::size_t l = 0; l < size; ++l)
    data[l] = orbit_value[static_cast<std::size_t>(table.orbit_of(l))];
  return SymTensor<T>::from_dense_unchecked(dec.order, dec.dim, std::move(data));
}

}  // namespace steroid

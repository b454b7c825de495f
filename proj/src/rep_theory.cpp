#include "shadowlab/rep_theory.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace shadowlab {

namespace {

using BigInt = boost::multiprecision::cpp_int;

struct BigRational {
  BigInt num, den;  // den > 0

  void reduce() {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    BigInt g = boost::multiprecision::gcd(num < 0 ? BigInt(-num) : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
  BigRational operator+(const BigRational& o) const {
    BigRational r{num * o.den + o.num * den, den * o.den};
    r.reduce();
    return r;
  }
  BigRational operator*(const BigRational& o) const {
    BigRational r{num * o.num, den * o.den};
    r.reduce();
    return r;
  }
  double value() const {
    return num.convert_to<double>() / den.convert_to<double>();
  }
};

BigInt factorial2(int twice) {
  // factorial of twice/2; twice must be even and non-negative
  if (twice < 0 || twice % 2 != 0) throw std::logic_error("factorial2: bad argument");
  BigInt f = 1;
  for (int k = 2; k <= twice / 2; ++k) f *= k;
  return f;
}

int to_twice(double x, const char* what) {
  const double t = 2.0 * x;
  const double r = std::round(t);
  if (std::abs(t - r) > 1e-9) throw std::invalid_argument(std::string(what) + ": not a half-integer");
  return static_cast<int>(r);
}

}  // namespace

double clebsch_gordan(double s1, double s2, double s12, double m1, double m2, double m12) {
  const int t1 = to_twice(s1, "clebsch_gordan s1");
  const int t2 = to_twice(s2, "clebsch_gordan s2");
  const int t3 = to_twice(s12, "clebsch_gordan s12");
  const int u1 = to_twice(m1, "clebsch_gordan m1");
  const int u2 = to_twice(m2, "clebsch_gordan m2");
  const int u3 = to_twice(m12, "clebsch_gordan m12");
  if (t1 < 0 || t2 < 0 || t3 < 0) throw std::invalid_argument("clebsch_gordan: negative spin");
  if (std::abs(u1) > t1 || std::abs(u2) > t2 || std::abs(u3) > t3)
    throw std::invalid_argument("clebsch_gordan: projection out of range");
  if ((t1 + u1) % 2 || (t2 + u2) % 2 || (t3 + u3) % 2)
    throw std::invalid_argument("clebsch_gordan: spin/projection parity mismatch");
  if (t3 < std::abs(t1 - t2) || t3 > t1 + t2 || (t1 + t2 + t3) % 2 != 0)
    throw std::invalid_argument("clebsch_gordan: triangle condition violated");
  if (u1 + u2 != u3) return 0.0;

  // van der Waerden form: C = sgn(S) sqrt(N * S^2) with
  //   N = (2 s12 + 1) Δ(s1 s2 s12) Π_i (s_i + m_i)!(s_i - m_i)!
  //   S = Σ_k (-1)^k / [k! (s1+s2-s12-k)! (s1-m1-k)! (s2+m2-k)! (s12-s2+m1+k)! (s12-s1-m2+k)!]
  BigRational n{BigInt(t3 + 1) * factorial2(t1 + t2 - t3) * factorial2(t1 - t2 + t3) *
                    factorial2(-t1 + t2 + t3),
                factorial2(t1 + t2 + t3 + 2)};
  n = n * BigRational{factorial2(t1 + u1) * factorial2(t1 - u1) * factorial2(t2 + u2) *
                          factorial2(t2 - u2) * factorial2(t3 + u3) * factorial2(t3 - u3),
                      1};
  BigRational s{0, 1};
  for (int k2 = 0; k2 <= t1 + t2 - t3; k2 += 2) {
    const int args[6] = {k2,
                         t1 + t2 - t3 - k2,
                         t1 - u1 - k2,
                         t2 + u2 - k2,
                         t3 - t2 + u1 + k2,
                         t3 - t1 - u2 + k2};
    bool ok = true;
    for (int a : args)
      if (a < 0) ok = false;
    if (!ok) continue;
    BigInt den = 1;
    for (int a : args) den *= factorial2(a);
    BigRational term{(k2 / 2) % 2 == 0 ? BigInt(1) : BigInt(-1), den};
    s = s + term;
  }
  const int sign = s.num == 0 ? 0 : (s.num < 0 ? -1 : 1);
  if (sign == 0) return 0.0;
  const BigRational sq = s * s * n;
  return sign * std::sqrt(sq.value());
}

Su2Generators su2_generators(double spin) {
  const int ts = to_twice(spin, "su2_generators spin");
  if (ts < 0) throw std::invalid_argument("su2_generators: spin must be >= 0");
  const Eigen::Index d = ts + 1;
  CMatrix jz = CMatrix::Zero(d, d), jp = CMatrix::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const double m = (ts - 2 * static_cast<double>(k)) / 2.0;  // spin .. -spin
    jz(k, k) = m;
    if (k > 0) {
      const double s = ts / 2.0;
      jp(k - 1, k) = std::sqrt(s * (s + 1) - m * (m + 1));  // J+ |s m> = c |s m+1>
    }
  }
  CMatrix jm = jp.adjoint();
  Su2Generators g;
  g.jx = 0.5 * (jp + jm);
  g.jy = Complex(0, -0.5) * (jp - jm);
  g.jz = jz;
  return g;
}

Partition::Partition(std::vector<int> p) : parts(std::move(p)) {
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i] <= 0) throw std::invalid_argument("Partition: parts must be positive");
    if (i > 0 && parts[i] > parts[i - 1])
      throw std::invalid_argument("Partition: parts must be non-increasing");
  }
}

int Partition::n() const { return std::accumulate(parts.begin(), parts.end(), 0); }

std::string Partition::str() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < parts.size(); ++i) os << (i ? "," : "") << parts[i];
  os << "]";
  return os.str();
}

Partition Partition::parse(const std::string& s) {
  std::vector<int> parts;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) parts.push_back(std::stoi(tok));
  }
  return Partition(parts);
}

long long hook_length_dim(const Partition& lambda) {
  const auto& p = lambda.parts;
  const int rows = lambda.rows();
  // column lengths
  std::vector<int> col(p.empty() ? 0 : p[0], 0);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < p[r]; ++c) col[c]++;
  boost::multiprecision::cpp_int num = 1, den = 1;
  for (int k = 1; k <= lambda.n(); ++k) num *= k;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < p[r]; ++c) den *= (p[r] - c) + (col[c] - r) - 1;
  boost::multiprecision::cpp_int d = num / den;
  return d.convert_to<long long>();
}

int StandardTableau::content(int k) const {
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      if (rows[r][c] == k) return static_cast<int>(c) - static_cast<int>(r);
  throw std::invalid_argument("StandardTableau::content: entry not found");
}

std::vector<int> StandardTableau::row_reading_word() const {
  std::vector<int> w;
  for (const auto& r : rows) w.insert(w.end(), r.begin(), r.end());
  return w;
}

StandardTableau StandardTableau::swapped(int k) const {
  StandardTableau t = *this;
  for (auto& r : t.rows)
    for (auto& x : r) {
      if (x == k)
        x = k + 1;
      else if (x == k + 1)
        x = k;
    }
  return t;
}

std::vector<StandardTableau> standard_tableaux(const Partition& lambda) {
  const int n = lambda.n();
  const int rows = lambda.rows();
  std::vector<std::vector<int>> t(rows);
  for (int r = 0; r < rows; ++r) t[r].assign(lambda.parts[r], 0);
  std::vector<StandardTableau> out;
  std::function<void(int)> rec = [&](int k) {
    if (k > n) {
      out.push_back(StandardTableau{lambda, t});
      return;
    }
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < lambda.parts[r]; ++c) {
        if (t[r][c] != 0) continue;
        if (c > 0 && t[r][c - 1] == 0) break;
        if (r > 0 && t[r - 1][c] == 0) continue;
        t[r][c] = k;
        rec(k + 1);
        t[r][c] = 0;
        break;  // only the first empty cell of each row is admissible
      }
    }
  };
  rec(1);
  std::sort(out.begin(), out.end(), [](const StandardTableau& a, const StandardTableau& b) {
    return a.row_reading_word() < b.row_reading_word();
  });
  return out;
}

SnIrrep::SnIrrep(Partition lambda) : lambda_(std::move(lambda)), n_(lambda_.n()) {
  tableaux_ = standard_tableaux(lambda_);
  const Eigen::Index d = dim();
  std::map<std::vector<int>, Eigen::Index> index;
  for (Eigen::Index j = 0; j < d; ++j) index[tableaux_[j].row_reading_word()] = j;
  transpositions_.reserve(std::max(0, n_ - 1));
  for (int i = 1; i <= n_ - 1; ++i) {
    CMatrix m = CMatrix::Zero(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
      const StandardTableau& t = tableaux_[j];
      const int r = t.content(i + 1) - t.content(i);  // axial distance
      if (r == 1) {
        m(j, j) = 1.0;  // i, i+1 in the same row
      } else if (r == -1) {
        m(j, j) = -1.0;  // same column
      } else {
        m(j, j) = 1.0 / r;
        const auto it = index.find(t.swapped(i).row_reading_word());
        if (it == index.end()) throw std::logic_error("SnIrrep: swapped tableau not standard");
        m(it->second, j) = std::sqrt(1.0 - 1.0 / (static_cast<double>(r) * r));
      }
    }
    transpositions_.push_back(std::move(m));
  }
}

const CMatrix& SnIrrep::transposition(int i) const {
  if (i < 1 || i > n_ - 1) throw std::invalid_argument("SnIrrep::transposition: index out of range");
  return transpositions_[i - 1];
}

std::vector<int> adjacent_transposition_word(const std::vector<int>& one_line) {
  std::vector<int> a = one_line;
  std::vector<int> word;
  // bubble sort to the identity; the recorded swaps, applied in reverse,
  // rebuild the permutation
  const int n = static_cast<int>(a.size());
  for (int pass = 0; pass < n; ++pass)
    for (int i = 0; i + 1 < n; ++i)
      if (a[i] > a[i + 1]) {
        std::swap(a[i], a[i + 1]);
        word.push_back(i + 1);
      }
  std::reverse(word.begin(), word.end());
  return word;
}

CMatrix SnIrrep::permutation(const std::vector<int>& one_line) const {
  if (static_cast<int>(one_line.size()) != n_)
    throw std::invalid_argument("SnIrrep::permutation: wrong length");
  CMatrix m = CMatrix::Identity(dim(), dim());
  for (int s : adjacent_transposition_word(one_line)) m = m * transposition(s);
  return m;
}

std::vector<int> cycle_type(const std::vector<int>& one_line) {
  const int n = static_cast<int>(one_line.size());
  std::vector<bool> seen(n, false);
  std::vector<int> cyc;
  for (int i = 0; i < n; ++i) {
    if (seen[i]) continue;
    int len = 0, j = i;
    while (!seen[j]) {
      seen[j] = true;
      j = one_line[j] - 1;
      ++len;
    }
    cyc.push_back(len);
  }
  std::sort(cyc.rbegin(), cyc.rend());
  return cyc;
}

long long sn_character(const Partition& lambda, const std::vector<int>& cycle) {
  const int n = lambda.n();
  if (std::accumulate(cycle.begin(), cycle.end(), 0) != n)
    throw std::invalid_argument("sn_character: cycle type size mismatch");
  // class representative: consecutive cycles (1 2 .. k1)(k1+1 ..)...
  std::vector<int> perm(n);
  int start = 0;
  for (int len : cycle) {
    for (int i = 0; i < len; ++i) perm[start + i] = start + 1 + (i + 1) % len;
    start += len;
  }
  const SnIrrep irrep{lambda};  // character table entries are integers
  const double tr = irrep.permutation(perm).real().trace();
  return static_cast<long long>(std::llround(tr));
}

NdcseReport check_ndcse(const CMatrix& basis_columns, const std::vector<int>& block_of,
                        const std::vector<CMatrix>& subgroup,
                        const std::vector<CMatrix>& parent_generators) {
  const Eigen::Index d = basis_columns.rows();
  if (basis_columns.cols() != d || static_cast<Eigen::Index>(block_of.size()) != d)
    throw std::invalid_argument("check_ndcse: shape mismatch");
  if ((basis_columns.adjoint() * basis_columns - CMatrix::Identity(d, d)).norm() > 1e-8)
    throw std::invalid_argument("check_ndcse: basis not orthonormal");
  for (std::size_t a = 0; a < subgroup.size(); ++a)
    for (std::size_t b = a + 1; b < subgroup.size(); ++b)
      if ((subgroup[a] * subgroup[b] - subgroup[b] * subgroup[a]).norm() > 1e-10)
        throw std::invalid_argument("check_ndcse: subgroup elements do not commute");

  NdcseReport rep;
  rep.characters = CMatrix::Zero(d, static_cast<Eigen::Index>(subgroup.size()));

  // Fourier-basis condition: blocks invariant under the parent generators.
  for (const CMatrix& g : parent_generators) {
    for (Eigen::Index v = 0; v < d; ++v) {
      CVector gv = g * basis_columns.col(v);
      for (Eigen::Index w = 0; w < d; ++w) {
        if (block_of[w] == block_of[v]) continue;
        if (std::abs(basis_columns.col(w).dot(gv)) > 1e-9) rep.is_fb = false;
      }
    }
  }

  // CSE condition: every vector an eigenvector of every subgroup element.
  rep.is_cse = true;
  for (std::size_t h = 0; h < subgroup.size(); ++h) {
    for (Eigen::Index v = 0; v < d; ++v) {
      CVector hv = subgroup[h] * basis_columns.col(v);
      const Complex chi = basis_columns.col(v).dot(hv);
      const double defect = (hv - chi * basis_columns.col(v)).norm();
      rep.max_eigen_defect = std::max(rep.max_eigen_defect, defect);
      if (defect > 1e-9) rep.is_cse = false;
      rep.characters(v, static_cast<Eigen::Index>(h)) = chi;
    }
  }

  // Non-degeneracy: character strings pairwise distinct within each block.
  rep.is_nondegenerate = true;
  for (Eigen::Index v = 0; v < d; ++v)
    for (Eigen::Index w = v + 1; w < d; ++w) {
      if (block_of[v] != block_of[w]) continue;
      double diff = 0.0;
      for (Eigen::Index h = 0; h < rep.characters.cols(); ++h)
        diff = std::max(diff, std::abs(rep.characters(v, h) - rep.characters(w, h)));
      if (diff < 1e-9) rep.is_nondegenerate = false;
    }
  return rep;
}

long long h_invariant_dimension(std::span<const Complex> character_values) {
  if (character_values.empty()) throw std::invalid_argument("h_invariant_dimension: empty input");
  Complex mean = 0;
  for (const Complex& c : character_values) mean += c;
  mean /= static_cast<double>(character_values.size());
  const double rounded = std::round(mean.real());
  if (std::abs(mean - Complex(rounded, 0)) > 0.1)
    throw std::runtime_error("h_invariant_dimension: residual too large, character data inconsistent");
  return static_cast<long long>(rounded);
}

long long h_invariant_dimension_torus(const std::function<Complex(std::span<const double>)>& chi,
                                      int torus_dim, RandomStream* rng) {
  const double two_pi = 6.283185307179586476925286766559;
  std::vector<Complex> values;
  if (torus_dim <= 3) {
    const int nodes = 64;
    std::vector<double> theta(torus_dim, 0.0);
    long long total = 1;
    for (int k = 0; k < torus_dim; ++k) total *= nodes;
    values.reserve(total);
    for (long long idx = 0; idx < total; ++idx) {
      long long rem = idx;
      for (int k = 0; k < torus_dim; ++k) {
        theta[k] = two_pi * static_cast<double>(rem % nodes) / nodes;
        rem /= nodes;
      }
      values.push_back(chi(theta));
    }
  } else {
    if (rng == nullptr)
      throw std::invalid_argument("h_invariant_dimension_torus: rng required for torus_dim > 3");
    const int samples = 200000;
    std::vector<double> theta(torus_dim);
    values.reserve(samples);
    for (int s = 0; s < samples; ++s) {
      for (int k = 0; k < torus_dim; ++k) theta[k] = two_pi * rng->uniform();
      values.push_back(chi(theta));
    }
  }
  return h_invariant_dimension(values);
}

}  // namespace shadowlab

#include "shadowlab/bases.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace shadowlab {

int MeasurementBasis::block_count() const {
  int m = -1;
  for (int b : block_of) m = std::max(m, b);
  return m + 1;
}

std::vector<std::vector<Eigen::Index>> MeasurementBasis::blocks() const {
  std::vector<std::vector<Eigen::Index>> out(static_cast<std::size_t>(block_count()));
  for (Eigen::Index v = 0; v < dim; ++v)
    out[static_cast<std::size_t>(block_of[static_cast<std::size_t>(v)])].push_back(v);
  return out;
}

double MeasurementBasis::gram_defect() const {
  return (vectors.adjoint() * vectors - CMatrix::Identity(dim, dim)).norm();
}

void MeasurementBasis::check(double tol) const {
  if (vectors.rows() != dim || vectors.cols() != dim)
    throw std::invalid_argument("MeasurementBasis: wrong shape");
  if (static_cast<Eigen::Index>(labels.size()) != dim ||
      static_cast<Eigen::Index>(block_of.size()) != dim)
    throw std::invalid_argument("MeasurementBasis: label table size mismatch");
  if (gram_defect() > tol) throw std::invalid_argument("MeasurementBasis: not orthonormal");
}

MeasurementBasis computational_basis(int n) {
  if (n < 1) throw std::invalid_argument("computational_basis: n must be >= 1");
  const Eigen::Index d = static_cast<Eigen::Index>(1) << n;
  MeasurementBasis b;
  b.dim = d;
  b.vectors = CMatrix::Identity(d, d);
  b.labels.resize(static_cast<std::size_t>(d));
  b.block_of.assign(static_cast<std::size_t>(d), 0);
  for (Eigen::Index v = 0; v < d; ++v) {
    std::string bits;
    for (int k = n - 1; k >= 0; --k) bits += ((v >> k) & 1) ? '1' : '0';
    b.labels[static_cast<std::size_t>(v)] = {"H", 1, bits};
  }
  return b;
}

MeasurementBasis bell_pair_basis(int n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("bell_pair_basis: n must be even");
  CMatrix bell2(4, 4);
  const double r = 1.0 / std::sqrt(2.0);
  bell2.setZero();
  // (|00>+|11>)/√2, (|00>-|11>)/√2, (|01>+|10>)/√2, (|01>-|10>)/√2
  bell2(0, 0) = r;
  bell2(3, 0) = r;
  bell2(0, 1) = r;
  bell2(3, 1) = -r;
  bell2(1, 2) = r;
  bell2(2, 2) = r;
  bell2(1, 3) = r;
  bell2(2, 3) = -r;
  static const char* kNames[4] = {"phi+", "phi-", "psi+", "psi-"};
  MeasurementBasis b;
  b.vectors = bell2;
  for (int p = 1; p < n / 2; ++p) b.vectors = tensor_product(b.vectors, bell2);
  b.dim = b.vectors.rows();
  b.labels.resize(static_cast<std::size_t>(b.dim));
  b.block_of.resize(static_cast<std::size_t>(b.dim));
  for (Eigen::Index v = 0; v < b.dim; ++v) {
    std::string name;
    Eigen::Index rem = v;
    for (int p = n / 2 - 1; p >= 0; --p) {
      Eigen::Index digit = (rem >> (2 * p)) & 3;
      name += kNames[digit];
      if (p) name += ".";
    }
    b.labels[static_cast<std::size_t>(v)] = {name, 1, name};
    b.block_of[static_cast<std::size_t>(v)] = static_cast<int>(v);
  }
  return b;
}

MeasurementBasis cyclic_fourier_basis(int n) {
  if (n < 2) throw std::invalid_argument("cyclic_fourier_basis: n must be >= 2");
  MeasurementBasis b;
  b.dim = n;
  b.vectors = CMatrix(n, n);
  const double two_pi = 6.283185307179586476925286766559;
  // phase chosen so that the n-cycle R(c)|j> = |j+1> acts as omega^k on |w_k>
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index j = 0; j < n; ++j)
      b.vectors(j, k) =
          std::exp(Complex(0, -two_pi * static_cast<double>(j * k) / n)) / std::sqrt(double(n));
  b.labels.resize(static_cast<std::size_t>(n));
  b.block_of.resize(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) {
    const bool trivial = (k == 0);
    b.labels[static_cast<std::size_t>(k)] = {trivial ? "trivial" : "standard", 1,
                                             "k=" + std::to_string(k)};
    b.block_of[static_cast<std::size_t>(k)] = trivial ? 0 : 1;
  }
  return b;
}

MeasurementBasis split_orthogonal_weight_basis(int d) {
  if (d < 2 || d % 2 != 0)
    throw std::invalid_argument("split_orthogonal_weight_basis: d must be even");
  MeasurementBasis b;
  b.dim = d;
  b.vectors = CMatrix::Identity(d, d);
  b.labels.resize(static_cast<std::size_t>(d));
  b.block_of.assign(static_cast<std::size_t>(d), 0);
  for (int i = 0; i < d; ++i) {
    const int which = i < d / 2 ? i + 1 : i + 1 - d / 2;
    const std::string w = (i < d / 2 ? "+L" : "-L") + std::to_string(which);
    b.labels[static_cast<std::size_t>(i)] = {"standard", 1, w};
  }
  return b;
}

Partition SchurLabel::lambda(int n) const {
  const int l2 = (n - two_s) / 2;
  std::vector<int> parts{n - l2};
  if (l2 > 0) parts.push_back(l2);
  return Partition(parts);
}

Eigen::Index SchurBasis::column_of(int two_s, int t_index, int two_m) const {
  for (const Block& blk : block_table) {
    if (blk.two_s != two_s || blk.t_index != t_index) continue;
    const Eigen::Index k = (two_s - two_m) / 2;  // m descending from s
    if (k < 0 || k >= blk.size) throw std::invalid_argument("SchurBasis::column_of: bad weight");
    return blk.offset + k;
  }
  throw std::invalid_argument("SchurBasis::column_of: no such block");
}

int SchurBasis::multiplicity(int two_s) const {
  int m = 0;
  for (const Block& blk : block_table) m += blk.two_s == two_s;
  return m;
}

MeasurementBasis SchurBasis::to_measurement_basis() const {
  MeasurementBasis b;
  b.dim = transform.rows();
  b.vectors = transform;
  b.labels.resize(static_cast<std::size_t>(b.dim));
  b.block_of.resize(static_cast<std::size_t>(b.dim));
  int block_id = -1;
  int prev_t = -1, prev_s = -1;
  for (Eigen::Index v = 0; v < b.dim; ++v) {
    const SchurLabel& l = labels[static_cast<std::size_t>(v)];
    if (l.two_s != prev_s || l.t_index != prev_t) {
      ++block_id;
      prev_s = l.two_s;
      prev_t = l.t_index;
    }
    b.labels[static_cast<std::size_t>(v)] = {l.lambda(n).str(), l.t_index,
                                             "2m=" + std::to_string(l.two_m)};
    b.block_of[static_cast<std::size_t>(v)] = block_id;
  }
  return b;
}

long long schur_multiplicity(int n, int two_s) {
  if (two_s < 0 || two_s > n || (n - two_s) % 2 != 0) return 0;
  const int l2 = (n - two_s) / 2;
  const int l1 = n - l2;
  // n! (l1 - l2 + 1) / ((l1 + 1)! l2!)
  long double v = l1 - l2 + 1;
  for (int k = 2; k <= n; ++k) v *= k;
  for (int k = 2; k <= l1 + 1; ++k) v /= k;
  for (int k = 2; k <= l2; ++k) v /= k;
  return static_cast<long long>(std::llround(static_cast<double>(v)));
}

SchurBasis schur_basis(int n) {
  if (n < 1 || n > 10) throw std::invalid_argument("schur_basis: need 1 <= n <= 10");
  struct Path {
    std::vector<int> spins;           // 2*s after each coupled qubit
    std::vector<CVector> columns;     // per weight, m descending (2m = s, s-2, ...)
  };
  std::vector<Path> paths;
  {
    Path p0;
    p0.spins = {1};
    CVector up(2), down(2);
    up << 1, 0;
    down << 0, 1;
    p0.columns = {up, down};
    paths.push_back(std::move(p0));
  }
  for (int k = 2; k <= n; ++k) {
    std::vector<Path> next;
    const Eigen::Index dk = static_cast<Eigen::Index>(1) << k;
    for (const Path& p : paths) {
      const int ts = p.spins.back();
      for (int tnew : {ts + 1, ts - 1}) {
        if (tnew < 0) continue;
        Path q;
        q.spins = p.spins;
        q.spins.push_back(tnew);
        q.columns.reserve(static_cast<std::size_t>(tnew) + 1);
        for (int tm = tnew; tm >= -tnew; tm -= 2) {
          CVector col = CVector::Zero(dk);
          for (int up = 1; up >= -1; up -= 2) {  // qubit weight 2mu = ±1
            const int tm_old = tm - up;
            if (std::abs(tm_old) > ts) continue;
            const double c = clebsch_gordan(ts / 2.0, 0.5, tnew / 2.0, tm_old / 2.0, up / 2.0,
                                            tm / 2.0);
            if (c == 0.0) continue;
            const CVector& old = p.columns[static_cast<std::size_t>((ts - tm_old) / 2)];
            // tensor with |0> or |1> of the new qubit
            const Eigen::Index half = dk / 2;
            for (Eigen::Index i = 0; i < half; ++i) {
              const Eigen::Index target = 2 * i + (up == 1 ? 0 : 1);
              col(target) += c * old(i);
            }
          }
          q.columns.push_back(std::move(col));
        }
        next.push_back(std::move(q));
      }
    }
    paths = std::move(next);
  }
  // Each coupling step appends the new qubit at the least significant bit, so
  // qubit 1 already sits at the most significant position (tensor order).
  const Eigen::Index d = static_cast<Eigen::Index>(1) << n;
  // order: s desc, then path lex desc, then m desc
  std::sort(paths.begin(), paths.end(), [](const Path& a, const Path& b) {
    if (a.spins.back() != b.spins.back()) return a.spins.back() > b.spins.back();
    return a.spins > b.spins;
  });
  SchurBasis out;
  out.n = n;
  out.transform = CMatrix(d, d);
  out.labels.resize(static_cast<std::size_t>(d));
  Eigen::Index col = 0;
  int prev_s = -1;
  int t_index = 0;
  for (const Path& p : paths) {
    const int ts = p.spins.back();
    t_index = (ts == prev_s) ? t_index + 1 : 1;
    prev_s = ts;
    out.block_table.push_back({ts, t_index, col, static_cast<Eigen::Index>(p.columns.size())});
    for (std::size_t w = 0; w < p.columns.size(); ++w) {
      out.transform.col(col) = p.columns[w];
      out.labels[static_cast<std::size_t>(col)] =
          SchurLabel{ts, t_index, p.spins, ts - 2 * static_cast<int>(w)};
      ++col;
    }
  }
  return out;
}

const CMatrix& SphericalOpBasis::at(int two_mu, int two_nu) const {
  const auto it = ops.find({two_mu, two_nu});
  if (it == ops.end()) throw std::invalid_argument("SphericalOpBasis::at: invalid indices");
  return it->second;
}

SphericalOpBasis spherical_operator_basis(const SchurBasis& basis, int two_s_eta, int t_index) {
  SphericalOpBasis out;
  out.two_s_eta = two_s_eta;
  out.t_index = t_index;
  const Eigen::Index d = basis.transform.rows();
  const double s = two_s_eta / 2.0;
  for (int two_mu = 0; two_mu <= 2 * two_s_eta; two_mu += 2) {
    for (int two_nu = -two_mu; two_nu <= two_mu; two_nu += 2) {
      CMatrix op = CMatrix::Zero(d, d);
      for (int two_m = -two_s_eta; two_m <= two_s_eta; two_m += 2) {
        const int two_mp = two_m - two_nu;
        if (std::abs(two_mp) > two_s_eta) continue;
        double c = clebsch_gordan(s, s, two_mu / 2.0, two_m / 2.0, (two_nu - two_m) / 2.0,
                                  two_nu / 2.0);
        if (((two_m + two_s_eta) / 2) % 2 != 0) c = -c;
        if (c == 0.0) continue;
        const Eigen::Index ket = basis.column_of(two_s_eta, t_index, two_m);
        const Eigen::Index bra = basis.column_of(two_s_eta, t_index, two_mp);
        op.noalias() += c * (basis.transform.col(ket) * basis.transform.col(bra).adjoint());
      }
      out.ops.emplace(std::make_pair(two_mu, two_nu), std::move(op));
    }
  }
  return out;
}

std::string labels_csv(const MeasurementBasis& basis) {
  std::ostringstream os;
  os << "index,irrep,multiplicity,weight\n";
  for (Eigen::Index v = 0; v < basis.dim; ++v) {
    const BasisLabel& l = basis.labels[static_cast<std::size_t>(v)];
    os << v << "," << l.irrep << "," << l.multiplicity << "," << l.weight << "\n";
  }
  return os.str();
}

}  // namespace shadowlab

#include "shadowlab/ensembles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <stdexcept>

namespace shadowlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

nlohmann::json matrix_to_json(const RMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

RMatrix matrix_from_json(const nlohmann::json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.at(0).size());
  RMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = j.at(i).at(c).get<double>();
  return m;
}

ElementDescriptor stream_descriptor(const std::string& name, const RandomStream& rng) {
  ElementDescriptor d;
  d.ensemble = name;
  d.params["seed"] = rng.seed();
  d.params["counter"] = rng.stream();
  return d;
}

CMatrix pauli(char c) {
  CMatrix m(2, 2);
  switch (c) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, Complex(0, -1), Complex(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("pauli: unknown label");
  }
  return m;
}

CMatrix normalize_phase(const CMatrix& u) {
  for (Eigen::Index j = 0; j < u.cols(); ++j)
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
      const Complex x = u(i, j);
      if (std::abs(x) > 1e-9) return u * (std::abs(x) / x);
    }
  return u;
}

}  // namespace

nlohmann::json ElementDescriptor::to_json() const {
  nlohmann::json j = params;
  j["ensemble"] = ensemble;
  return j;
}

ElementDescriptor ElementDescriptor::from_json(const nlohmann::json& j) {
  ElementDescriptor d;
  d.ensemble = j.at("ensemble").get<std::string>();
  d.params = j;
  d.params.erase("ensemble");
  return d;
}

FormMatrix FormMatrix::identity(Eigen::Index d) {
  return {Kind::Identity, CMatrix::Identity(d, d)};
}

FormMatrix FormMatrix::split_orthogonal(Eigen::Index d) {
  if (d % 2 != 0) throw std::invalid_argument("split_orthogonal form: d must be even");
  CMatrix q = CMatrix::Zero(d, d);
  q.block(0, d / 2, d / 2, d / 2) = CMatrix::Identity(d / 2, d / 2);
  q.block(d / 2, 0, d / 2, d / 2) = CMatrix::Identity(d / 2, d / 2);
  return {Kind::SplitOrthogonal, q};
}

FormMatrix FormMatrix::symplectic_omega(Eigen::Index d) {
  if (d % 2 != 0) throw std::invalid_argument("symplectic form: d must be even");
  CMatrix w = CMatrix::Zero(d, d);
  w.block(0, d / 2, d / 2, d / 2) = CMatrix::Identity(d / 2, d / 2);
  w.block(d / 2, 0, d / 2, d / 2) = -CMatrix::Identity(d / 2, d / 2);
  return {Kind::SymplecticOmega, w};
}

MajoranaSet majorana_operators(int n) {
  if (n < 1) throw std::invalid_argument("majorana_operators: n must be >= 1");
  MajoranaSet set;
  set.n = n;
  const CMatrix x = pauli('X'), y = pauli('Y'), z = pauli('Z'), id = pauli('I');
  for (int j = 1; j <= n; ++j) {
    for (const CMatrix* tail : {&x, &y}) {
      CMatrix m = CMatrix::Ones(1, 1);
      for (int k = 1; k <= n; ++k) {
        const CMatrix& factor = (k < j) ? z : (k == j ? *tail : id);
        m = tensor_product(m, factor);
      }
      set.gammas.push_back(m);
    }
  }
  return set;
}

CMatrix majorana_monomial(const MajoranaSet& m, const std::vector<int>& indices) {
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] < 1 || indices[i] > 2 * m.n)
      throw std::invalid_argument("majorana_monomial: index out of range");
    if (i > 0 && indices[i] <= indices[i - 1])
      throw std::invalid_argument("majorana_monomial: indices must be strictly increasing");
  }
  const Eigen::Index d = m.gammas.at(0).rows();
  CMatrix out = CMatrix::Identity(d, d);
  for (int idx : indices) out = out * m.gammas[idx - 1];
  // (-i)^{floor(m/2)} makes the product Hermitian for any degree m
  const int k = static_cast<int>(indices.size()) / 2;
  Complex phase(1, 0);
  for (int i = 0; i < k; ++i) phase *= Complex(0, -1);
  return phase * out;
}

CMatrix haar_unitary(Eigen::Index d, RandomStream& rng) {
  if (d < 1) throw std::invalid_argument("haar_unitary: d must be >= 1");
  CMatrix g(d, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < d; ++i) g(i, j) = Complex(rng.gaussian(), rng.gaussian());
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < d; ++j) {
    Complex rj = r(j, j);
    q.col(j) *= rj / std::abs(rj);
  }
  return q;
}

CMatrix haar_orthogonal(Eigen::Index d, RandomStream& rng, const FormMatrix& form) {
  if (d < 2) throw std::invalid_argument("haar_orthogonal: d must be >= 2");
  RMatrix g(d, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < d; ++i) g(i, j) = rng.gaussian();
  Eigen::HouseholderQR<RMatrix> qr(g);
  RMatrix q = qr.householderQ();
  RMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < d; ++j)
    if (r(j, j) < 0) q.col(j) *= -1.0;
  switch (form.kind) {
    case FormMatrix::Kind::Identity:
      return q.cast<Complex>();
    case FormMatrix::Kind::SplitOrthogonal: {
      // W unitary with W W^T = Q; then O = W R W† satisfies O^T Q O = Q.
      const CMatrix w = [&] {
        const Eigen::Index h = d / 2;
        CMatrix two(2, 2);
        const Complex ph = std::exp(Complex(0, -kPi / 4)) / std::sqrt(2.0);
        two << ph, ph * Complex(0, 1), ph * Complex(0, 1), ph;
        return tensor_product(two, CMatrix::Identity(h, h));
      }();
      return w * q.cast<Complex>() * w.adjoint();
    }
    default:
      throw std::invalid_argument("haar_orthogonal: unsupported form");
  }
}

CMatrix haar_special_orthogonal(Eigen::Index d, RandomStream& rng) {
  CMatrix o = haar_orthogonal(d, rng, FormMatrix::identity(d));
  RMatrix q = o.real();
  if (q.determinant() < 0) q.col(d - 1) *= -1.0;
  return q.cast<Complex>();
}

CMatrix haar_symplectic(Eigen::Index d, RandomStream& rng) {
  if (d < 2 || d % 2 != 0) throw std::invalid_argument("haar_symplectic: d must be even");
  const CMatrix omega = FormMatrix::symplectic_omega(d).matrix;
  // Quaternionic Gram-Schmidt: each accepted column v brings its partner
  // Omega^T conj(v); normalizing by the real norm keeps the draw Haar.
  std::vector<CVector> cols;
  for (Eigen::Index j = 0; j < d / 2; ++j) {
    CVector v(d);
    double nrm = 0.0;
    do {
      for (Eigen::Index i = 0; i < d; ++i) v(i) = Complex(rng.gaussian(), rng.gaussian());
      for (const CVector& u : cols) v -= u * u.dot(v);
      nrm = v.norm();
    } while (nrm < 1e-8);
    v /= nrm;
    cols.push_back(v);
    cols.push_back(omega.transpose() * v.conjugate());
  }
  CMatrix u(d, d);
  for (Eigen::Index j = 0; j < d / 2; ++j) {
    u.col(j) = cols[2 * static_cast<std::size_t>(j)];
    u.col(d / 2 + j) = cols[2 * static_cast<std::size_t>(j) + 1];
  }
  return u;
}

const std::vector<CMatrix>& single_qubit_cliffords() {
  static const std::vector<CMatrix> table = [] {
    const CMatrix h = [] {
      CMatrix m(2, 2);
      m << 1, 1, 1, -1;
      return CMatrix(m / std::sqrt(2.0));
    }();
    const CMatrix s = [] {
      CMatrix m(2, 2);
      m << 1, 0, 0, Complex(0, 1);
      return m;
    }();
    auto key = [](const CMatrix& u) {
      std::array<long long, 8> k{};
      int t = 0;
      for (Eigen::Index j = 0; j < 2; ++j)
        for (Eigen::Index i = 0; i < 2; ++i) {
          k[t++] = std::llround(u(i, j).real() * 1e6);
          k[t++] = std::llround(u(i, j).imag() * 1e6);
        }
      return k;
    };
    std::map<std::array<long long, 8>, CMatrix> found;
    CMatrix id = CMatrix::Identity(2, 2);
    found[key(id)] = id;
    bool grew = true;
    while (grew) {
      grew = false;
      std::vector<CMatrix> current;
      current.reserve(found.size());
      for (const auto& [k, u] : found) current.push_back(u);
      for (const CMatrix& u : current)
        for (const CMatrix* g : {&h, &s}) {
          CMatrix v = normalize_phase((*g) * u);
          if (found.emplace(key(v), v).second) grew = true;
        }
    }
    std::vector<CMatrix> out;
    out.reserve(found.size());
    for (const auto& [k, u] : found) out.push_back(u);
    if (out.size() != 24) throw std::logic_error("single_qubit_cliffords: closure size != 24");
    return out;
  }();
  return table;
}

CMatrix su2_from_quaternion(double w, double x, double y, double z) {
  const double nrm = std::sqrt(w * w + x * x + y * y + z * z);
  w /= nrm;
  x /= nrm;
  y /= nrm;
  z /= nrm;
  CMatrix u(2, 2);
  u << Complex(w, x), Complex(-y, z), Complex(y, z), Complex(w, -x);
  return u;
}

CMatrix matchgate_unitary(const MajoranaSet& m, const RMatrix& q) {
  const Eigen::Index two_n = q.rows();
  if (two_n != 2 * m.n || q.cols() != two_n)
    throw std::invalid_argument("matchgate_unitary: shape mismatch");
  const Eigen::Index d = m.gammas.at(0).rows();
  // Givens factorization Q = G_1 G_2 ... acting on mode space; each plane
  // rotation lifts to cos(t/2) I - sin(t/2) g_a g_b, applied right-to-left.
  RMatrix r = q;
  std::vector<std::array<double, 3>> rotations;  // (a, b, theta)
  for (Eigen::Index col = 0; col < two_n; ++col) {
    for (Eigen::Index row = two_n - 1; row > col; --row) {
      const double aa = r(row - 1, col), bb = r(row, col);
      if (std::abs(bb) < 1e-15) continue;
      const double theta = std::atan2(bb, aa);
      const double c = std::cos(theta), s = std::sin(theta);
      // rotate rows (row-1, row) to zero r(row, col)
      for (Eigen::Index k = col; k < two_n; ++k) {
        const double u1 = r(row - 1, k), u2 = r(row, k);
        r(row - 1, k) = c * u1 + s * u2;
        r(row, k) = -s * u1 + c * u2;
      }
      rotations.push_back({static_cast<double>(row - 1), static_cast<double>(row), theta});
    }
  }
  // r is now diagonal ±1 with det +1; fold sign pairs into angle-pi rotations.
  std::vector<Eigen::Index> minus;
  for (Eigen::Index k = 0; k < two_n; ++k)
    if (r(k, k) < 0) minus.push_back(k);
  if (minus.size() % 2 != 0)
    throw std::invalid_argument("matchgate_unitary: q is not special orthogonal");
  CMatrix u = CMatrix::Identity(d, d);
  auto apply_rotation = [&](Eigen::Index a, Eigen::Index b, double theta) {
    // u <- exp(-theta/2 g_a g_b) u ; note exp maps the plane rotation by theta
    const CMatrix gab = m.gammas[static_cast<std::size_t>(a)] * m.gammas[static_cast<std::size_t>(b)];
    u = std::cos(theta / 2) * u - std::sin(theta / 2) * (gab * u);
  };
  for (std::size_t k = 0; k + 1 < minus.size(); k += 2) apply_rotation(minus[k], minus[k + 1], kPi);
  // Q = (G(rot_0) G(rot_1) ...)^{-1} applied... rebuild left-to-right:
  for (auto it = rotations.rbegin(); it != rotations.rend(); ++it)
    apply_rotation(static_cast<Eigen::Index>((*it)[0]), static_cast<Eigen::Index>((*it)[1]), (*it)[2]);
  return u;
}

CMatrix matchgate_unitary_generator(const MajoranaSet& m, const RMatrix& q) {
  const RMatrix a = -logm_special_orthogonal(q.cast<Complex>());
  const Eigen::Index d = m.gammas.at(0).rows();
  CMatrix x = CMatrix::Zero(d, d);
  for (Eigen::Index mu = 0; mu < a.rows(); ++mu)
    for (Eigen::Index nu = 0; nu < a.cols(); ++nu)
      if (a(mu, nu) != 0.0)
        x += Complex(-0.25 * a(mu, nu), 0) *
             (m.gammas[static_cast<std::size_t>(mu)] * m.gammas[static_cast<std::size_t>(nu)]);
  return expm(x);
}

GroupEnsemble haar_unitary_ensemble(int d) {
  GroupEnsemble e;
  e.name = "haar-unitary";
  e.dim = d;
  e.sample = [d](RandomStream& rng) {
    ElementDescriptor desc = stream_descriptor("haar-unitary", rng);
    desc.params["d"] = d;
    return SampledElement{haar_unitary(d, rng), std::move(desc)};
  };
  e.reconstruct = [](const ElementDescriptor& desc) {
    RandomStream rng(desc.params.at("seed").get<std::uint64_t>(),
                     desc.params.at("counter").get<std::uint64_t>());
    return haar_unitary(desc.params.at("d").get<int>(), rng);
  };
  return e;
}

GroupEnsemble haar_orthogonal_ensemble(int d, FormMatrix::Kind kind) {
  GroupEnsemble e;
  const bool split = kind == FormMatrix::Kind::SplitOrthogonal;
  e.name = split ? "haar-orthogonal-split" : "haar-orthogonal";
  e.dim = d;
  const std::string name = e.name;
  e.sample = [d, kind, name](RandomStream& rng) {
    ElementDescriptor desc = stream_descriptor(name, rng);
    desc.params["d"] = d;
    const FormMatrix form = kind == FormMatrix::Kind::SplitOrthogonal
                                ? FormMatrix::split_orthogonal(d)
                                : FormMatrix::identity(d);
    return SampledElement{haar_orthogonal(d, rng, form), std::move(desc)};
  };
  e.reconstruct = [kind](const ElementDescriptor& desc) {
    RandomStream rng(desc.params.at("seed").get<std::uint64_t>(),
                     desc.params.at("counter").get<std::uint64_t>());
    const int d = desc.params.at("d").get<int>();
    const FormMatrix form = kind == FormMatrix::Kind::SplitOrthogonal
                                ? FormMatrix::split_orthogonal(d)
                                : FormMatrix::identity(d);
    return haar_orthogonal(d, rng, form);
  };
  return e;
}

GroupEnsemble haar_symplectic_ensemble(int d) {
  GroupEnsemble e;
  e.name = "haar-symplectic";
  e.dim = d;
  e.sample = [d](RandomStream& rng) {
    ElementDescriptor desc = stream_descriptor("haar-symplectic", rng);
    desc.params["d"] = d;
    return SampledElement{haar_symplectic(d, rng), std::move(desc)};
  };
  e.reconstruct = [](const ElementDescriptor& desc) {
    RandomStream rng(desc.params.at("seed").get<std::uint64_t>(),
                     desc.params.at("counter").get<std::uint64_t>());
    return haar_symplectic(desc.params.at("d").get<int>(), rng);
  };
  return e;
}

namespace {

CMatrix local_clifford_from_indices(const std::vector<int>& idx) {
  const auto& table = single_qubit_cliffords();
  CMatrix u = CMatrix::Ones(1, 1);
  for (int k : idx) u = tensor_product(u, table.at(static_cast<std::size_t>(k)));
  return u;
}

}  // namespace

GroupEnsemble local_clifford_ensemble(int n) {
  if (n < 1) throw std::invalid_argument("local_clifford_ensemble: n must be >= 1");
  GroupEnsemble e;
  e.name = "local-clifford";
  e.dim = static_cast<Eigen::Index>(1) << n;
  long long card = 1;
  for (int i = 0; i < n; ++i) card *= 24;
  e.cardinality = card;
  e.sample = [n](RandomStream& rng) {
    std::vector<int> idx(static_cast<std::size_t>(n));
    for (int& k : idx) k = static_cast<int>(rng.integer(24));
    ElementDescriptor desc;
    desc.ensemble = "local-clifford";
    desc.params["indices"] = idx;
    return SampledElement{local_clifford_from_indices(idx), std::move(desc)};
  };
  e.reconstruct = [](const ElementDescriptor& desc) {
    return local_clifford_from_indices(desc.params.at("indices").get<std::vector<int>>());
  };
  if (n <= 3) {
    e.enumerate = [n]() {
      std::vector<SampledElement> out;
      std::vector<int> idx(static_cast<std::size_t>(n), 0);
      while (true) {
        ElementDescriptor desc;
        desc.ensemble = "local-clifford";
        desc.params["indices"] = idx;
        out.push_back({local_clifford_from_indices(idx), std::move(desc)});
        int pos = n - 1;
        while (pos >= 0 && ++idx[static_cast<std::size_t>(pos)] == 24) {
          idx[static_cast<std::size_t>(pos)] = 0;
          --pos;
        }
        if (pos < 0) break;
      }
      return out;
    };
  }
  return e;
}

namespace {

CMatrix pauli_string_matrix(const std::vector<int>& labels) {
  static const char kNames[4] = {'I', 'X', 'Y', 'Z'};
  CMatrix u = CMatrix::Ones(1, 1);
  for (int k : labels) u = tensor_product(u, pauli(kNames[k]));
  return u;
}

}  // namespace

GroupEnsemble pauli_group_ensemble(int n) {
  if (n < 1 || n > 6) throw std::invalid_argument("pauli_group_ensemble: need 1 <= n <= 6");
  GroupEnsemble e;
  e.name = "pauli";
  e.dim = static_cast<Eigen::Index>(1) << n;
  long long card = 1;
  for (int i = 0; i < n; ++i) card *= 4;
  e.cardinality = card;
  e.sample = [n](RandomStream& rng) {
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (int& k : labels) k = static_cast<int>(rng.integer(4));
    ElementDescriptor desc;
    desc.ensemble = "pauli";
    desc.params["labels"] = labels;
    return SampledElement{pauli_string_matrix(labels), std::move(desc)};
  };
  e.reconstruct = [](const ElementDescriptor& desc) {
    return pauli_string_matrix(desc.params.at("labels").get<std::vector<int>>());
  };
  e.enumerate = [n, card]() {
    std::vector<SampledElement> out;
    out.reserve(static_cast<std::size_t>(card));
    std::vector<int> labels(static_cast<std::size_t>(n), 0);
    for (long long t = 0; t < card; ++t) {
      long long rem = t;
      for (int k = 0; k < n; ++k) {
        labels[static_cast<std::size_t>(k)] = static_cast<int>(rem % 4);
        rem /= 4;
      }
      ElementDescriptor desc;
      desc.ensemble = "pauli";
      desc.params["labels"] = labels;
      out.push_back({pauli_string_matrix(labels), std::move(desc)});
    }
    return out;
  };
  return e;
}

GroupEnsemble su2_tensor_ensemble(int n) {
  if (n < 1) throw std::invalid_argument("su2_tensor_ensemble: n must be >= 1");
  GroupEnsemble e;
  e.name = "su2-tensor";
  e.dim = static_cast<Eigen::Index>(1) << n;
  e.sample = [n](RandomStream& rng) {
    ElementDescriptor desc = stream_descriptor("su2-tensor", rng);
    desc.params["n"] = n;
    const CMatrix u = su2_from_quaternion(rng.gaussian(), rng.gaussian(), rng.gaussian(), rng.gaussian());
    return SampledElement{tensor_power(u, n), std::move(desc)};
  };
  e.reconstruct = [](const ElementDescriptor& desc) {
    RandomStream rng(desc.params.at("seed").get<std::uint64_t>(),
                     desc.params.at("counter").get<std::uint64_t>());
    const int n = desc.params.at("n").get<int>();
    const CMatrix u = su2_from_quaternion(rng.gaussian(), rng.gaussian(), rng.gaussian(), rng.gaussian());
    return tensor_power(u, n);
  };
  return e;
}

CMatrix su2_wigner_rotation(double spin, const CMatrix& u2) {
  // z-y-z Euler factorization of the SU(2) element; reusing the angles on the
  // spin-J generators evaluates the representation exactly (any branch works,
  // the factor product only depends on u2).
  const Su2Generators g = su2_generators(spin);
  const double beta = 2.0 * std::atan2(std::abs(u2(1, 0)), std::abs(u2(0, 0)));
  const double apg = -2.0 * std::arg(u2(0, 0));  // alpha + gamma
  const double amg = 2.0 * std::arg(u2(1, 0));   // alpha - gamma
  const double alpha = 0.5 * (apg + amg);
  const double gamma = 0.5 * (apg - amg);
  const Eigen::Index d = g.jz.rows();
  CVector za(d), zg(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    za(k) = std::exp(Complex(0, -alpha * g.jz(k, k).real()));
    zg(k) = std::exp(Complex(0, -gamma * g.jz(k, k).real()));
  }
  return za.asDiagonal() * expm(Complex(0, -beta) * g.jy) * zg.asDiagonal();
}

GroupEnsemble su2_spin_ensemble(double spin) {
  GroupEnsemble e;
  e.name = "su2-spin";
  const int ts = static_cast<int>(std::llround(2 * spin));
  e.dim = ts + 1;
  e.sample = [spin](RandomStream& rng) {
    ElementDescriptor desc = stream_descriptor("su2-spin", rng);
    desc.params["two_j"] = static_cast<int>(std::llround(2 * spin));
    const CMatrix u = su2_from_quaternion(rng.gaussian(), rng.gaussian(), rng.gaussian(), rng.gaussian());
    return SampledElement{su2_wigner_rotation(spin, u), std::move(desc)};
  };
  e.reconstruct = [spin](const ElementDescriptor& desc) {
    RandomStream rng(desc.params.at("seed").get<std::uint64_t>(),
                     desc.params.at("counter").get<std::uint64_t>());
    const CMatrix u = su2_from_quaternion(rng.gaussian(), rng.gaussian(), rng.gaussian(), rng.gaussian());
    return su2_wigner_rotation(spin, u);
  };
  return e;
}

GroupEnsemble matchgate_ensemble(int n) {
  if (n < 1 || n > 7) throw std::invalid_argument("matchgate_ensemble: need 1 <= n <= 7");
  GroupEnsemble e;
  e.name = "matchgate";
  e.dim = static_cast<Eigen::Index>(1) << n;
  e.sample = [n](RandomStream& rng) {
    const MajoranaSet m = majorana_operators(n);
    const RMatrix q = haar_special_orthogonal(2 * n, rng).real();
    ElementDescriptor desc;
    desc.ensemble = "matchgate";
    desc.params["n"] = n;
    desc.params["q"] = matrix_to_json(q);
    return SampledElement{matchgate_unitary(m, q), std::move(desc)};
  };
  e.reconstruct = [](const ElementDescriptor& desc) {
    const int n = desc.params.at("n").get<int>();
    const MajoranaSet m = majorana_operators(n);
    return matchgate_unitary(m, matrix_from_json(desc.params.at("q")));
  };
  return e;
}

GroupEnsemble particle_preserving_ensemble(int n) {
  if (n < 1 || n > 6) throw std::invalid_argument("particle_preserving_ensemble: need 1 <= n <= 6");
  GroupEnsemble e;
  e.name = "particle-preserving";
  e.dim = static_cast<Eigen::Index>(1) << n;
  e.sample = [n](RandomStream& rng) {
    ElementDescriptor desc = stream_descriptor("particle-preserving", rng);
    desc.params["n"] = n;
    const CMatrix u = haar_unitary(n, rng);
    // h = -i log u (principal branch, via the Schur form of the unitary);
    // U = exp(i sum h_jk a_j† a_k) is block-diagonal over number sectors.
    Eigen::ComplexSchur<CMatrix> schur(u);
    CVector phases(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      const Complex lam = schur.matrixT()(k, k);
      phases(k) = std::atan2(lam.imag(), lam.real());
    }
    const CMatrix h = schur.matrixU() * phases.asDiagonal() * schur.matrixU().adjoint();
    const MajoranaSet m = majorana_operators(n);
    const Eigen::Index d = m.gammas[0].rows();
    std::vector<CMatrix> a(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
      a[static_cast<std::size_t>(j)] =
          0.5 * (m.gammas[static_cast<std::size_t>(2 * j)] +
                 Complex(0, 1) * m.gammas[static_cast<std::size_t>(2 * j + 1)]);
    CMatrix ham = CMatrix::Zero(d, d);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        ham += h(j, k) * (a[static_cast<std::size_t>(j)].adjoint() * a[static_cast<std::size_t>(k)]);
    return SampledElement{expm(Complex(0, 1) * ham), std::move(desc)};
  };
  e.reconstruct = [sample = e.sample](const ElementDescriptor& desc) {
    RandomStream rng(desc.params.at("seed").get<std::uint64_t>(),
                     desc.params.at("counter").get<std::uint64_t>());
    return sample(rng).unitary;
  };
  return e;
}

namespace {

CMatrix permutation_matrix(const std::vector<int>& one_line) {
  const int n = static_cast<int>(one_line.size());
  CMatrix m = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) m(one_line[static_cast<std::size_t>(i)] - 1, i) = 1.0;  // R|i> = |p(i)>
  return m;
}

std::vector<int> random_permutation(int n, RandomStream& rng) {
  std::vector<int> p(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i + 1;
  for (int i = n - 1; i > 0; --i)
    std::swap(p[static_cast<std::size_t>(i)],
              p[static_cast<std::size_t>(rng.integer(static_cast<std::uint64_t>(i) + 1))]);
  return p;
}

template <typename MatrixOf>
std::vector<SampledElement> enumerate_permutations(int n, const std::string& name,
                                                   MatrixOf&& matrix_of) {
  std::vector<int> p(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i + 1;
  std::vector<SampledElement> out;
  do {
    ElementDescriptor desc;
    desc.ensemble = name;
    desc.params["perm"] = p;
    out.push_back({matrix_of(p), std::move(desc)});
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

}  // namespace

GroupEnsemble symmetric_group_ensemble(int n) {
  if (n < 1) throw std::invalid_argument("symmetric_group_ensemble: n must be >= 1");
  GroupEnsemble e;
  e.name = "symmetric-group";
  e.dim = n;
  long long card = 1;
  for (int i = 2; i <= n; ++i) card *= i;
  e.cardinality = card;
  e.sample = [n](RandomStream& rng) {
    const std::vector<int> p = random_permutation(n, rng);
    ElementDescriptor desc;
    desc.ensemble = "symmetric-group";
    desc.params["perm"] = p;
    return SampledElement{permutation_matrix(p), std::move(desc)};
  };
  e.reconstruct = [](const ElementDescriptor& desc) {
    return permutation_matrix(desc.params.at("perm").get<std::vector<int>>());
  };
  if (n <= 8) {
    e.enumerate = [n]() {
      return enumerate_permutations(n, "symmetric-group", permutation_matrix);
    };
  }
  return e;
}

GroupEnsemble sn_irrep_ensemble(const Partition& lambda) {
  const int n = lambda.n();
  if (n > 6) throw std::invalid_argument("sn_irrep_ensemble: n too large for enumeration");
  auto irrep = std::make_shared<SnIrrep>(lambda);
  GroupEnsemble e;
  e.name = "sn-irrep";
  e.dim = irrep->dim();
  long long card = 1;
  for (int i = 2; i <= n; ++i) card *= i;
  e.cardinality = card;
  e.sample = [irrep, n](RandomStream& rng) {
    const std::vector<int> p = random_permutation(n, rng);
    ElementDescriptor desc;
    desc.ensemble = "sn-irrep";
    desc.params["perm"] = p;
    desc.params["lambda"] = irrep->shape().parts;
    return SampledElement{irrep->permutation(p), std::move(desc)};
  };
  e.reconstruct = [irrep](const ElementDescriptor& desc) {
    return irrep->permutation(desc.params.at("perm").get<std::vector<int>>());
  };
  e.enumerate = [irrep, n]() {
    return enumerate_permutations(n, "sn-irrep",
                                  [&](const std::vector<int>& p) { return irrep->permutation(p); });
  };
  return e;
}

}  // namespace shadowlab

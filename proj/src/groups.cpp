#include "opball/groups.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "opball/sampling.hpp"

namespace opball {

namespace {

// A group given by a faithful unitary matrix representation; the table and
// the irreducibles are indexed by the element order of `faithful`.
struct NamedGroup {
  std::vector<Matrix> faithful;
  std::vector<std::vector<Matrix>> irreps;  // irreps[r][g]
};

std::size_t lookup(const std::vector<Matrix>& elements, const Matrix& m) {
  for (std::size_t k = 0; k < elements.size(); ++k) {
    if ((elements[k] - m).norm() < 1e-9) return k;
  }
  throw Error(ErrorKind::InvalidRepresentation, "element list is not closed under products");
}

GroupTable cayley_table(const std::vector<Matrix>& elements) {
  GroupTable table(elements.size(), std::vector<std::size_t>(elements.size()));
  for (std::size_t g = 0; g < elements.size(); ++g)
    for (std::size_t h = 0; h < elements.size(); ++h) table[g][h] = lookup(elements, elements[g] * elements[h]);
  return table;
}

Matrix scalar(Complex z) { return Matrix::Constant(1, 1, z); }

NamedGroup cyclic(int n) {
  NamedGroup out;
  for (int k = 0; k < n; ++k) out.faithful.push_back(scalar(std::polar(1.0, 2.0 * std::numbers::pi * k / n)));
  for (int m = 0; m < n; ++m) {
    std::vector<Matrix> chi;
    for (int k = 0; k < n; ++k) chi.push_back(scalar(std::polar(1.0, 2.0 * std::numbers::pi * m * k / n)));
    out.irreps.push_back(std::move(chi));
  }
  return out;
}

NamedGroup symmetric3() {
  NamedGroup out;
  std::vector<int> perm{0, 1, 2};
  do {
    Matrix p = Matrix::Zero(3, 3);
    for (int i = 0; i < 3; ++i) p(perm[static_cast<std::size_t>(i)], i) = 1.0;
    out.faithful.push_back(p);
  } while (std::next_permutation(perm.begin(), perm.end()));

  // orthonormal basis of the sum-zero plane
  Matrix b(3, 2);
  b << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(6.0),
      -1.0 / std::sqrt(2.0), 1.0 / std::sqrt(6.0),
      0.0, -2.0 / std::sqrt(6.0);
  std::vector<Matrix> trivial, sign, standard;
  for (const auto& p : out.faithful) {
    trivial.push_back(scalar(1.0));
    sign.push_back(scalar(p.determinant()));
    standard.push_back(b.adjoint() * p * b);
  }
  out.irreps = {trivial, sign, standard};
  return out;
}

NamedGroup quaternion8() {
  const Complex i(0.0, 1.0);
  Matrix one = Matrix::Identity(2, 2);
  Matrix qi(2, 2), qj(2, 2);
  qi << i, 0.0, 0.0, -i;
  qj << 0.0, 1.0, -1.0, 0.0;
  const Matrix qk = qi * qj;
  NamedGroup out;
  out.faithful = {one, -one, qi, -qi, qj, -qj, qk, -qk};
  // one-dimensional characters: +1 on the centre and on one of the pairs {±i}, {±j}, {±k}
  const int signs[4][4] = {{1, 1, 1, 1}, {1, 1, -1, -1}, {1, -1, 1, -1}, {1, -1, -1, 1}};
  for (const auto& s : signs) {
    std::vector<Matrix> chi;
    for (std::size_t g = 0; g < 8; ++g) chi.push_back(scalar(static_cast<double>(s[g / 2])));
    out.irreps.push_back(std::move(chi));
  }
  out.irreps.push_back(out.faithful);
  return out;
}

NamedGroup named_group(const std::string& name) {
  if (name == "S3") return symmetric3();
  if (name == "Q8") return quaternion8();
  if (name.size() >= 2 && name[0] == 'C' &&
      std::all_of(name.begin() + 1, name.end(), [](char c) { return c >= '0' && c <= '9'; }) &&
      name.size() <= 5) {
    const int n = std::stoi(name.substr(1));
    if (n >= 1 && n <= 120) return cyclic(n);
  }
  throw Error(ErrorKind::UnknownGroup, "unknown group '" + name + "' (expected C<n>, S3 or Q8)");
}

// Random multiset of irreducibles from `allowed` with total dimension `dim`.
std::optional<std::vector<std::size_t>> pick_irreps(Rng& rng, const NamedGroup& group,
                                                    const std::vector<std::size_t>& allowed, Index dim) {
  std::vector<std::size_t> chosen;
  Index remaining = dim;
  while (remaining > 0) {
    std::vector<std::size_t> fitting;
    for (std::size_t r : allowed) {
      if (group.irreps[r].front().rows() <= remaining) fitting.push_back(r);
    }
    if (fitting.empty()) return std::nullopt;
    std::uniform_int_distribution<std::size_t> pick(0, fitting.size() - 1);
    const std::size_t r = fitting[pick(rng)];
    chosen.push_back(r);
    remaining -= group.irreps[r].front().rows();
  }
  return chosen;
}

Matrix direct_sum(const NamedGroup& group, const std::vector<std::size_t>& parts, std::size_t g, Index dim) {
  Matrix out = Matrix::Zero(dim, dim);
  Index offset = 0;
  for (std::size_t r : parts) {
    const Matrix& block = group.irreps[r][g];
    out.block(offset, offset, block.rows(), block.cols()) = block;
    offset += block.rows();
  }
  return out;
}

}  // namespace

GroupTable group_table(const std::string& name) { return cayley_table(named_group(name).faithful); }

TestRepresentation make_test_representation(const std::string& group_name, const PontryaginSignature& sig,
                                            double conditioning, std::uint64_t seed, const Tolerances& tol) {
  if (!(conditioning >= 1.0) || !std::isfinite(conditioning)) {
    throw Error(ErrorKind::InvalidArgument, "conditioning must be a finite number >= 1");
  }
  const NamedGroup group = named_group(group_name);
  const GroupTable table = cayley_table(group.faithful);
  Rng rng(seed);

  std::vector<std::size_t> all(group.irreps.size());
  for (std::size_t r = 0; r < all.size(); ++r) all[r] = r;

  std::optional<std::vector<std::size_t>> k_parts;
  std::optional<std::vector<std::size_t>> h_parts;
  for (int attempt = 0; attempt < 64 && !h_parts; ++attempt) {
    k_parts = pick_irreps(rng, group, all, sig.n_minus());
    if (!k_parts) continue;
    std::vector<std::size_t> rest;
    for (std::size_t r : all) {
      if (std::find(k_parts->begin(), k_parts->end(), r) == k_parts->end()) rest.push_back(r);
    }
    h_parts = pick_irreps(rng, group, rest, sig.n_plus());
  }
  if (!h_parts) {
    // no disjoint choice exists; the fixed point need not be unique then
    for (int attempt = 0; attempt < 64 && !(k_parts && h_parts); ++attempt) {
      k_parts = pick_irreps(rng, group, all, sig.n_minus());
      h_parts = pick_irreps(rng, group, all, sig.n_plus());
    }
    if (!k_parts || !h_parts) {
      throw Error(ErrorKind::InvalidArgument, "signature cannot be filled with irreducibles of " + group_name);
    }
  }

  const Matrix w = random_block_unitary(rng, sig.n_plus(), sig.n_minus());
  const Matrix v = random_eta_preserving(rng, sig.n_plus(), sig.n_minus(), 0.5 * std::log(conditioning));
  const Matrix j = sig.J();
  const Matrix v_inv = j * v.adjoint() * j;

  std::vector<Matrix> unitary;
  std::vector<Matrix> images;
  for (std::size_t g = 0; g < group.faithful.size(); ++g) {
    Matrix tau = Matrix::Zero(sig.dim(), sig.dim());
    tau.topLeftCorner(sig.n_plus(), sig.n_plus()) = direct_sum(group, *h_parts, g, sig.n_plus());
    tau.bottomRightCorner(sig.n_minus(), sig.n_minus()) = direct_sum(group, *k_parts, g, sig.n_minus());
    tau = w * tau * w.adjoint();
    images.push_back(v * tau * v_inv);
    unitary.push_back(std::move(tau));
  }

  Representation rep = Representation::create(sig, table, std::move(images), true, tol);
  const BallAutomorphism vt = induced_automorphism(sig, v, tol);
  BallPoint expected = automorphism_apply(vt, BallPoint::zero(sig.n_plus(), sig.n_minus()), tol);
  return TestRepresentation{std::move(rep), v, std::move(unitary), std::move(expected)};
}

}  // namespace opball

#include "parasol/spectral_operator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

namespace parasol {

namespace {
constexpr double kClampRel = 1e-12;
}

SpectralOperator::SpectralOperator(RealVec eigenvalues)
    : eigenvalues_(std::move(eigenvalues)),
      basis_(Mat::Identity(eigenvalues_.size(), eigenvalues_.size())) {
  if (eigenvalues_.size() == 0)
    throw std::invalid_argument("SpectralOperator: empty spectrum");
  if (!std::is_sorted(eigenvalues_.begin(), eigenvalues_.end()))
    throw std::invalid_argument("SpectralOperator: eigenvalues must be ascending");
  clamp_and_classify();
}

SpectralOperator::SpectralOperator(RealVec eigenvalues, Mat basis)
    : eigenvalues_(std::move(eigenvalues)), basis_(std::move(basis)) {
  clamp_and_classify();
}

void SpectralOperator::clamp_and_classify() {
  if (eigenvalues_.minCoeff() < 0) {
    const double floor = -kClampRel * std::max(1.0, eigenvalues_.cwiseAbs().maxCoeff());
    if (eigenvalues_.minCoeff() < floor)
      throw std::invalid_argument("SpectralOperator: negative eigenvalue");
  }
  const double lmax = eigenvalues_.size() ? eigenvalues_.cwiseAbs().maxCoeff() : 0.0;
  const double cut = kClampRel * lmax;
  for (Eigen::Index i = 0; i < eigenvalues_.size(); ++i)
    if (eigenvalues_[i] <= cut) eigenvalues_[i] = 0.0;
  injective_ = eigenvalues_.size() > 0 && eigenvalues_.minCoeff() > 0.0;
}

SpectralOperator SpectralOperator::from_hermitian(const Mat& matrix) {
  if (matrix.rows() != matrix.cols())
    throw std::invalid_argument("SpectralOperator::from_hermitian: not square");
  const double asym = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
  if (asym > 1e-10 * scale)
    throw std::invalid_argument("SpectralOperator::from_hermitian: matrix not Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es(matrix);
  if (es.info() != Eigen::Success)
    throw numeric_error("SpectralOperator::from_hermitian: eigensolver failed", asym);
  return SpectralOperator(es.eigenvalues(), es.eigenvectors());
}

void SpectralOperator::check_vector(const Vec& v, const char* where) const {
  if (v.size() != dim()) {
    std::ostringstream os;
    os << where << ": vector length " << v.size() << " != operator dim " << dim();
    throw std::invalid_argument(os.str());
  }
}

Vec SpectralOperator::apply_function(const std::function<Complex(double)>& f,
                                     const Vec& v) const {
  check_vector(v, "apply_function");
  Vec out(dim());
  for (Eigen::Index i = 0; i < dim(); ++i) {
    const Complex fi = f(eigenvalues_[i]);
    if (!std::isfinite(fi.real()) || !std::isfinite(fi.imag())) {
      std::ostringstream os;
      os << "apply_function: f not finite at eigenvalue " << eigenvalues_[i]
         << " (index " << i << ")";
      throw std::domain_error(os.str());
    }
    out[i] = fi * v[i];
  }
  return out;
}

Vec SpectralOperator::fractional_power(double alpha, const Vec& v) const {
  check_vector(v, "fractional_power");
  if (alpha < 0.0 && !injective_)
    throw std::domain_error("fractional_power: S not injective");
  if (alpha == 0.0) return v;
  Vec out(dim());
  for (Eigen::Index i = 0; i < dim(); ++i)
    out[i] = std::pow(eigenvalues_[i], alpha) * v[i];
  return out;
}

double SpectralOperator::homogeneous_norm(double alpha, const Vec& v) const {
  return fractional_power(alpha, v).norm();
}

SpectralOperator SpectralOperator::shift(double lambda) const {
  if (lambda < 0.0)
    throw std::invalid_argument("shift: lambda must be nonnegative");
  RealVec shifted(dim());
  for (Eigen::Index i = 0; i < dim(); ++i)
    shifted[i] = std::hypot(lambda, eigenvalues_[i]);
  return SpectralOperator(std::move(shifted), basis_);
}

std::pair<Vec, Vec> SpectralOperator::kernel_split(const Vec& v) const {
  check_vector(v, "kernel_split");
  Vec ran = v, nul = Vec::Zero(dim());
  for (Eigen::Index i = 0; i < dim(); ++i) {
    if (eigenvalues_[i] == 0.0) {
      nul[i] = v[i];
      ran[i] = 0.0;
    }
  }
  return {std::move(ran), std::move(nul)};
}

RealVec SpectralOperator::power_spectrum(double alpha) const {
  if (alpha < 0.0 && !injective_)
    throw std::domain_error("power_spectrum: S not injective");
  if (alpha == 0.0) return RealVec::Ones(dim());
  RealVec out(dim());
  for (Eigen::Index i = 0; i < dim(); ++i)
    out[i] = std::pow(eigenvalues_[i], alpha);
  return out;
}

SpectralOperator load_operator(const std::string& json_text) {
  const auto j = nlohmann::json::parse(json_text);
  if (j.contains("eigenvalues")) {
    const auto& evs = j.at("eigenvalues");
    RealVec lambda(evs.size());
    for (std::size_t i = 0; i < evs.size(); ++i) lambda[i] = evs[i].get<double>();
    if (j.contains("basis") && j.at("basis").get<std::string>() != "identity")
      throw std::invalid_argument("load_operator: eigenvalue form requires basis=identity");
    return SpectralOperator(std::move(lambda));
  }
  if (j.contains("matrix")) {
    const auto& rows = j.at("matrix");
    const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
    Mat m(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
      const auto& row = rows[static_cast<std::size_t>(r)];
      if (row.size() == static_cast<std::size_t>(n)) {       // real entries
        for (Eigen::Index c = 0; c < n; ++c)
          m(r, c) = Complex(row[static_cast<std::size_t>(c)].get<double>(), 0.0);
      } else if (row.size() == static_cast<std::size_t>(2 * n)) {  // re/im pairs
        for (Eigen::Index c = 0; c < n; ++c)
          m(r, c) = Complex(row[static_cast<std::size_t>(2 * c)].get<double>(),
                            row[static_cast<std::size_t>(2 * c + 1)].get<double>());
      } else {
        throw std::invalid_argument("load_operator: bad matrix row length");
      }
    }
    return SpectralOperator::from_hermitian(m);
  }
  throw std::invalid_argument("load_operator: need \"eigenvalues\" or \"matrix\"");
}

std::string save_operator(const SpectralOperator& op) {
  nlohmann::json j;
  if (op.basis().isIdentity(1e-14)) {
    j["eigenvalues"] = std::vector<double>(op.eigenvalues().begin(), op.eigenvalues().end());
    j["basis"] = "identity";
  } else {
    const Mat m = op.basis() * op.eigenvalues().asDiagonal() * op.basis().adjoint();
    std::vector<std::vector<double>> rows;
    rows.reserve(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      std::vector<double> row;
      row.reserve(static_cast<std::size_t>(2 * m.cols()));
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        row.push_back(m(r, c).real());
        row.push_back(m(r, c).imag());
      }
      rows.push_back(std::move(row));
    }
    j["matrix"] = rows;
  }
  return j.dump(2);
}

}  // namespace parasol

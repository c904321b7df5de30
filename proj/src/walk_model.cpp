#include "oqrw/walk_model.hpp"

#include "oqrw/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace oqrw {

namespace {

std::string pair_name(const std::vector<std::string>& labels, SiteIndex from, SiteIndex to) {
  std::ostringstream os;
  os << "(to=" << (to.id < labels.size() ? labels[to.id] : std::to_string(to.id))
     << ", from=" << (from.id < labels.size() ? labels[from.id] : std::to_string(from.id)) << ")";
  return os.str();
}

ValidationReport kraus_residuals(std::size_t h_dim, const std::vector<std::vector<Arc>>& outgoing,
                                 double tol) {
  const auto h = static_cast<Eigen::Index>(h_dim);
  ValidationReport report;
  report.tol = tol;
  report.residuals.resize(outgoing.size());
  for (std::size_t j = 0; j < outgoing.size(); ++j) {
    ComplexMatrix sum = -ComplexMatrix::Identity(h, h);
    for (const Arc& arc : outgoing[j]) sum.noalias() += arc.op.adjoint() * arc.op;
    report.residuals[j] = sum.norm();
    if (j == 0 || report.residuals[j] > report.max_residual) {
      report.max_residual = report.residuals[j];
      report.worst_site = SiteIndex{j};
    }
  }
  report.pass = report.max_residual <= tol;
  return report;
}

}  // namespace

TransitionFamily::TransitionFamily(std::size_t h_dim, std::vector<std::string> sites,
                                   std::vector<TransitionEntry> transitions, ValidationMode mode,
                                   double kraus_tol)
    : h_dim_(h_dim), labels_(std::move(sites)), mode_(mode), kraus_tol_(kraus_tol) {
  if (h_dim_ == 0) throw DimensionError("h_dim must be positive");
  if (labels_.empty()) throw StructuralError("walk needs at least one site");
  if (!(kraus_tol_ > 0.0)) throw StructuralError("kraus_tol must be positive");
  {
    std::set<std::string> seen;
    for (const auto& l : labels_)
      if (!seen.insert(l).second) throw StructuralError("duplicate site label '" + l + "'");
  }

  const std::size_t n = labels_.size();
  std::map<std::pair<std::size_t, std::size_t>, ComplexMatrix> ordered;
  for (auto& t : transitions) {
    if (t.from.id >= n || t.to.id >= n)
      throw StructuralError("transition " + pair_name(labels_, t.from, t.to) + " references an unknown site");
    if (static_cast<std::size_t>(t.op.rows()) != h_dim_ || static_cast<std::size_t>(t.op.cols()) != h_dim_)
      throw DimensionError("transition " + pair_name(labels_, t.from, t.to) + " has a " +
                           std::to_string(t.op.rows()) + "x" + std::to_string(t.op.cols()) +
                           " operator, expected " + std::to_string(h_dim_) + "x" + std::to_string(h_dim_));
    if (!linalg::all_finite(t.op))
      throw StructuralError("transition " + pair_name(labels_, t.from, t.to) + " has a non-finite entry");
    if (!ordered.emplace(std::make_pair(t.from.id, t.to.id), std::move(t.op)).second)
      throw StructuralError("transition " + pair_name(labels_, t.from, t.to) + " given twice");
  }

  outgoing_.resize(n);
  incoming_.resize(n);
  for (auto& [key, op] : ordered) {
    outgoing_[key.first].push_back(Arc{SiteIndex{key.second}, op});
    incoming_[key.second].push_back(Arc{SiteIndex{key.first}, op});
  }
  num_transitions_ = ordered.size();

  report_ = kraus_residuals(h_dim_, outgoing_, kraus_tol_);
  if (mode_ == ValidationMode::strict && !report_.pass) {
    std::ostringstream os;
    os << "Kraus condition violated at site '" << labels_[report_.worst_site.id]
       << "': residual " << report_.max_residual << " > " << kraus_tol_;
    throw NormalizationError(os.str(), report_.max_residual, report_.worst_site);
  }
}

std::optional<SiteIndex> TransitionFamily::find_site(const std::string& label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return SiteIndex{static_cast<std::size_t>(it - labels_.begin())};
}

std::vector<TransitionEntry> TransitionFamily::entries() const {
  std::vector<TransitionEntry> out;
  out.reserve(num_transitions_);
  for (std::size_t j = 0; j < outgoing_.size(); ++j)
    for (const Arc& arc : outgoing_[j]) out.push_back(TransitionEntry{SiteIndex{j}, arc.site, arc.op});
  return out;
}

ValidationReport validate_kraus(const TransitionFamily& family, double tol) {
  std::vector<std::vector<Arc>> outgoing(family.num_sites());
  for (std::size_t j = 0; j < family.num_sites(); ++j) {
    const auto arcs = family.outgoing(SiteIndex{j});
    outgoing[j].assign(arcs.begin(), arcs.end());
  }
  return kraus_residuals(family.h_dim(), outgoing, tol);
}

TransitionFamily build_ring_walk(std::size_t n_sites, const ComplexMatrix& B, const ComplexMatrix& C,
                                 double kraus_tol) {
  if (n_sites < 3) throw StructuralError("ring walk needs at least 3 sites");
  if (B.rows() != B.cols() || C.rows() != C.cols() || B.rows() != C.rows() || B.rows() == 0)
    throw DimensionError("ring walk operators must be square and of equal size");
  const auto h = B.rows();
  const double residual = (B.adjoint() * B + C.adjoint() * C - ComplexMatrix::Identity(h, h)).norm();
  if (!(residual <= kraus_tol)) {
    std::ostringstream os;
    os << "ring walk needs B*B + C*C = I, residual " << residual;
    throw NormalizationError(os.str(), residual, SiteIndex{0});
  }

  std::vector<std::string> labels(n_sites);
  for (std::size_t i = 0; i < n_sites; ++i) labels[i] = std::to_string(i);
  std::vector<TransitionEntry> transitions;
  transitions.reserve(2 * n_sites);
  for (std::size_t i = 0; i < n_sites; ++i) {
    transitions.push_back({SiteIndex{i}, SiteIndex{(i + n_sites - 1) % n_sites}, B});
    transitions.push_back({SiteIndex{i}, SiteIndex{(i + 1) % n_sites}, C});
  }
  return TransitionFamily(static_cast<std::size_t>(h), std::move(labels), std::move(transitions),
                          ValidationMode::strict, kraus_tol);
}

TransitionFamily build_two_site_walk(Complex a, Complex b, Complex c, Complex d, double p, ValidationMode mode,
                                     double kraus_tol) {
  if (!(p > 0.0 && p < 1.0)) throw StructuralError("two-site walk needs p in (0, 1)");
  const double q = 1.0 - p;
  ComplexMatrix b11 = ComplexMatrix::Zero(2, 2);
  b11(0, 0) = a;
  b11(1, 1) = b;
  ComplexMatrix b12 = ComplexMatrix::Zero(2, 2);
  b12(0, 1) = std::sqrt(p);
  ComplexMatrix b22 = ComplexMatrix::Zero(2, 2);
  b22(0, 0) = 1.0;
  b22(1, 1) = std::sqrt(q);
  ComplexMatrix b21 = ComplexMatrix::Zero(2, 2);
  b21(0, 0) = c;
  b21(1, 1) = d;

  const SiteIndex s1{0};
  const SiteIndex s2{1};
  std::vector<TransitionEntry> transitions = {
      {s1, s1, b11},
      {s2, s1, b12},
      {s2, s2, b22},
      {s1, s2, b21},
  };
  return TransitionFamily(2, {"1", "2"}, std::move(transitions), mode, kraus_tol);
}

}  // namespace oqrw

#include "sres/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "sres/errors.hpp"

namespace sres {

void LabelMatrix::validate() const {
  if (votes.empty()) throw DimensionError("label matrix needs at least one method");
  const auto n = votes.front().size();
  if (n == 0) throw DimensionError("label matrix needs at least one record");
  for (const auto& col : votes)
    if (col.size() != n) throw DimensionError("label matrix columns have different lengths");
  if (!method_ids.empty() && method_ids.size() != votes.size())
    throw DimensionError("method id count differs from vote column count");
}

namespace {

struct Parameters {
  std::vector<Confusion> pi;
  double p_outlier = 0.5;
};

// Eqs. for pi and p with soft counts and additive smoothing.
Parameters m_step(const LabelMatrix& votes, const std::vector<std::array<double, 2>>& post,
                  double s) {
  const std::size_t n = votes.records();
  double mass_o = 0.0;
  for (const auto& p : post) mass_o += p[kOutlier];
  const double mass_i = static_cast<double>(n) - mass_o;

  Parameters out;
  out.p_outlier = (mass_o + s) / (static_cast<double>(n) + 2.0 * s);
  out.pi.resize(votes.methods());
  for (std::size_t m = 0; m < votes.methods(); ++m) {
    double o_flagged = 0.0;
    double i_flagged = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!votes.vote(i, m)) continue;
      o_flagged += post[i][kOutlier];
      i_flagged += post[i][kInlier];
    }
    auto& c = out.pi[m];
    c.oo = (o_flagged + s) / (mass_o + 2.0 * s);
    c.oi = 1.0 - c.oo;
    c.io = (i_flagged + s) / (mass_i + 2.0 * s);
    c.ii = 1.0 - c.io;
  }
  return out;
}

double log_or_floor(double x) { return std::log(std::max(x, 1e-300)); }

// Posterior P(T_i = outlier) proportional to p_o * prod_m pi^m_{o, vote}.
std::vector<std::array<double, 2>> e_step(const LabelMatrix& votes, const Parameters& par) {
  const std::size_t n = votes.records();
  std::vector<std::array<double, 2>> post(n);
  const double lp_o = log_or_floor(par.p_outlier);
  const double lp_i = log_or_floor(1.0 - par.p_outlier);
  for (std::size_t i = 0; i < n; ++i) {
    double lo = lp_o;
    double li = lp_i;
    for (std::size_t m = 0; m < votes.methods(); ++m) {
      const auto& c = par.pi[m];
      if (votes.vote(i, m)) {
        lo += log_or_floor(c.oo);
        li += log_or_floor(c.io);
      } else {
        lo += log_or_floor(c.oi);
        li += log_or_floor(c.ii);
      }
    }
    const double top = std::max(lo, li);
    const double eo = std::exp(lo - top);
    const double ei = std::exp(li - top);
    post[i][kOutlier] = eo / (eo + ei);
    post[i][kInlier] = 1.0 - post[i][kOutlier];
  }
  return post;
}

Flags hard_labels(const std::vector<std::array<double, 2>>& post) {
  Flags labels(post.size());
  for (std::size_t i = 0; i < post.size(); ++i) labels[i] = post[i][kOutlier] >= 0.5;
  return labels;
}

}  // namespace

double em_objective(const LabelMatrix& votes, const std::vector<Confusion>& pi, double p_outlier,
                    double smoothing) {
  double ll = 0.0;
  const double lp_o = log_or_floor(p_outlier);
  const double lp_i = log_or_floor(1.0 - p_outlier);
  for (std::size_t i = 0; i < votes.records(); ++i) {
    double lo = lp_o;
    double li = lp_i;
    for (std::size_t m = 0; m < votes.methods(); ++m) {
      const auto& c = pi[m];
      lo += log_or_floor(votes.vote(i, m) ? c.oo : c.oi);
      li += log_or_floor(votes.vote(i, m) ? c.io : c.ii);
    }
    const double top = std::max(lo, li);
    ll += top + std::log(std::exp(lo - top) + std::exp(li - top));
  }
  // Beta(1 + s, 1 + s) prior implied by the additive smoothing.
  double prior = lp_o + lp_i;
  for (const auto& c : pi)
    prior += log_or_floor(c.oo) + log_or_floor(c.oi) + log_or_floor(c.io) + log_or_floor(c.ii);
  return ll + smoothing * prior;
}

EnsembleModel em_fit(const LabelMatrix& votes, const EmOptions& options) {
  votes.validate();
  const std::size_t n = votes.records();
  const std::size_t methods = votes.methods();

  std::vector<std::array<double, 2>> post(n);
  if (options.initial_posteriors) {
    if (options.initial_posteriors->size() != n)
      throw DimensionError("initial posterior count differs from record count");
    for (std::size_t i = 0; i < n; ++i) {
      const double p = std::clamp((*options.initial_posteriors)[i], 0.0, 1.0);
      post[i] = {p, 1.0 - p};
    }
  } else {
    // Unweighted majority vote; the literal 0.5/0.5 start is a fixed point.
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t flagged = 0;
      for (std::size_t m = 0; m < methods; ++m) flagged += votes.vote(i, m) ? 1 : 0;
      const double p = static_cast<double>(flagged) / static_cast<double>(methods);
      post[i] = {p, 1.0 - p};
    }
  }

  EnsembleModel model;
  model.method_ids = votes.method_ids;
  Flags labels = hard_labels(post);
  Parameters par = m_step(votes, post, options.smoothing);
  model.objective.push_back(em_objective(votes, par.pi, par.p_outlier, options.smoothing));

  for (std::size_t it = 1; it <= options.max_iter; ++it) {
    auto next = e_step(votes, par);
    double delta = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      delta = std::max(delta, std::abs(next[i][kOutlier] - post[i][kOutlier]));
    Flags next_labels = hard_labels(next);
    const bool labels_stable = next_labels == labels;
    post = std::move(next);
    labels = std::move(next_labels);
    par = m_step(votes, post, options.smoothing);
    model.objective.push_back(em_objective(votes, par.pi, par.p_outlier, options.smoothing));
    model.iterations = it;
    if (delta < options.tol || (options.stop_on_stable_labels && labels_stable)) {
      model.converged = true;
      break;
    }
  }

  // Outliers are the minority class; relabel the latent classes if EM settled
  // on the mirror solution.
  if (par.p_outlier > 0.5) {
    model.swapped = true;
    par.p_outlier = 1.0 - par.p_outlier;
    for (auto& c : par.pi) c = Confusion{c.ii, c.io, c.oi, c.oo};
    for (auto& p : post) std::swap(p[kOutlier], p[kInlier]);
  }

  model.pi = std::move(par.pi);
  model.p_outlier = par.p_outlier;
  model.p_inlier = 1.0 - par.p_outlier;
  model.labels = hard_labels(post);
  model.posteriors = std::move(post);
  return model;
}

const Flags& consensus_flags(const EnsembleModel& model) { return model.labels; }

RatePanel method_rates(const EnsembleModel& model, std::size_t m) {
  if (m >= model.pi.size())
    throw RangeError("method index " + std::to_string(m) + " out of range (M=" +
                     std::to_string(model.pi.size()) + ")");
  return {model.pi[m].oo, model.pi[m].ii, model.p_outlier};
}

std::string ensemble_report(const EnsembleModel& model) {
  std::ostringstream out;
  out << std::setprecision(6) << std::fixed;
  out << "records: " << model.labels.size() << '\n';
  out << "consensus_outliers: " << count_flags(model.labels) << '\n';
  out << "p_outlier: " << model.p_outlier << '\n';
  out << "p_inlier: " << model.p_inlier << '\n';
  out << "iterations: " << model.iterations << '\n';
  out << "converged: " << (model.converged ? "yes" : "no") << '\n';
  out << "classes_swapped: " << (model.swapped ? "yes" : "no") << '\n';
  for (std::size_t m = 0; m < model.pi.size(); ++m) {
    const auto& c = model.pi[m];
    const std::string id = m < model.method_ids.size() ? model.method_ids[m] : std::to_string(m);
    out << "\nmethod: " << id << '\n';
    out << "  sensitivity: " << c.oo << '\n';
    out << "  specificity: " << c.ii << '\n';
    out << "  confusion (rows true, cols output; outlier, inlier):\n";
    out << "    outlier  " << c.oo << "  " << c.oi << '\n';
    out << "    inlier   " << c.io << "  " << c.ii << '\n';
  }
  return out.str();
}

}  // namespace sres

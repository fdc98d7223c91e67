#include "bitime/oracle.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bitime::trajectory {

using namespace vfield;

namespace {

struct Evaluation {
  double objective = kInf;  // hit time, or horizon + closest distance
  double hit = kInf;
  double min_dist = kInf;
};

class Search {
 public:
  Search(const Multifunction& f, const Vector& alpha, const Vector& beta, const OracleOptions& opts)
      : f_(f), alpha_(alpha), beta_(beta), opts_(opts) {
    const int s = opts_.stages;
    const auto per_stage = static_cast<long>(std::ceil(opts_.horizon / (s * opts_.dt_max) - 1e-12));
    steps_ = std::max<long>(1, per_stage) * s;
    dt_ = opts_.horizon / static_cast<double>(steps_);
    letters_ = letter_controls(f_, opts_.ball_directions);
    if (std::holds_alternative<Polytopic>(f_.kind())) {
      const auto verts = f_.eval_vertices(alpha_);
      vertices_ = Matrix(alpha_.size(), static_cast<Eigen::Index>(verts.size()));
      for (std::size_t i = 0; i < verts.size(); ++i) vertices_.col(static_cast<Eigen::Index>(i)) = verts[i];
    }
  }

  double dt() const { return dt_; }
  long steps() const { return steps_; }
  const std::vector<Control>& letters() const { return letters_; }

  Evaluation evaluate(const std::vector<Control>& ctrl, double cutoff) const {
    Evaluation e;
    const double tol = opts_.terminal_tol;
    Vector x = alpha_;
    double d = (x - beta_).norm();
    e.min_dist = d;
    if (d <= tol) {
      e.hit = 0.0;
      e.objective = 0.0;
      return e;
    }
    const long per_stage = steps_ / static_cast<long>(ctrl.size());
    for (long k = 0; k < steps_; ++k) {
      const double t = static_cast<double>(k) * dt_;
      if (t >= cutoff) break;
      const Control& c = ctrl[static_cast<std::size_t>(k / per_stage)];
      Vector next = rk4_step(f_, x, c, dt_);
      if (opts_.box && !opts_.box->contains(next, 1e-12)) break;
      const double dn = (next - beta_).norm();
      double inside_h = -1.0;
      if (dn <= tol) {
        inside_h = dt_;
      } else {
        // The step may cross the ball without ending inside it.
        const Vector seg = next - x;
        const double len2 = seg.squaredNorm();
        if (len2 > 0.0) {
          const double s = std::clamp((beta_ - x).dot(seg) / len2, 0.0, 1.0);
          if ((x + s * seg - beta_).norm() <= tol && s > 0.0) {
            const double h = s * dt_;
            if ((rk4_step(f_, x, c, h) - beta_).norm() <= tol) inside_h = h;
          }
        }
      }
      if (inside_h > 0.0) {
        double lo = 0.0;
        double hi = inside_h;
        for (int it = 0; it < 60 && hi - lo > 1e-15; ++it) {
          const double mid = 0.5 * (lo + hi);
          if ((rk4_step(f_, x, c, mid) - beta_).norm() <= tol) {
            hi = mid;
          } else {
            lo = mid;
          }
        }
        e.hit = t + hi;
        e.min_dist = std::min(e.min_dist, tol);
        e.objective = e.hit;
        return e;
      }
      e.min_dist = std::min(e.min_dist, dn);
      x = std::move(next);
    }
    e.objective = opts_.horizon + e.min_dist;
    return e;
  }

  std::vector<Control> moves(const Control& c, double step) const {
    std::vector<Control> out;
    const auto& kind = f_.kind();
    if (std::holds_alternative<Polytopic>(kind)) {
      const Eigen::Index m = c.size();
      for (Eigen::Index a = 0; a < m; ++a) {
        const double t = std::min(step, c[a]);
        if (t <= 0.0) continue;
        for (Eigen::Index b = 0; b < m; ++b) {
          if (a == b) continue;
          Control w = c;
          w[a] -= t;
          w[b] += t;
          if (w[a] < 1e-15) w[a] = 0.0;
          out.push_back(std::move(w));
        }
      }
      if (auto w = stretch(c)) out.push_back(std::move(*w));
      return out;
    }
    if (std::holds_alternative<Singleton>(kind)) return out;
    const auto* hb = std::get_if<HalfBall>(&kind);
    auto project = [&](Control u) {
      if (hb != nullptr) {
        const auto a = static_cast<Eigen::Index>(hb->axis);
        if (hb->orientation * u[a] < 0.0) u[a] = 0.0;
      }
      const double n = u.norm();
      if (n > 1.0) u /= n;
      return u;
    };
    for (Eigen::Index j = 0; j < c.size(); ++j) {
      for (double sgn : {1.0, -1.0}) {
        Control u = c;
        u[j] += sgn * step;
        out.push_back(project(std::move(u)));
      }
    }
    const double n = c.norm();
    if (n > 0.0 && n < 1.0) out.push_back(c / n);
    return out;
  }

  // Weights for the fastest velocity of the hull (vertices taken at alpha)
  // along the current velocity direction. Hits sit in narrow valleys of
  // control space, and single transfers cannot speed up without leaving them.
  std::optional<Control> stretch(const Control& w) const {
    const Eigen::Index n = vertices_.rows();
    const Eigen::Index m = vertices_.cols();
    const Vector u = vertices_ * w;
    if (!(u.norm() > 1e-12) || m < n) return std::nullopt;
    // The ray leaves the hull through a face spanned by n vertices.
    std::vector<Eigen::Index> pick(static_cast<std::size_t>(n));
    std::iota(pick.begin(), pick.end(), 0);
    double best = 1.0 + 1e-9;
    std::optional<Control> out;
    for (int guard = 0; guard < 2000; ++guard) {
      Matrix a = Matrix::Zero(n + 1, n + 1);
      Vector rhs = Vector::Zero(n + 1);
      for (Eigen::Index k = 0; k < n; ++k) {
        a.block(0, k, n, 1) = vertices_.col(pick[static_cast<std::size_t>(k)]);
        a(n, k) = 1.0;
      }
      a.block(0, n, n, 1) = -u;
      rhs[n] = 1.0;
      const Eigen::FullPivLU<Matrix> lu(a);
      if (lu.isInvertible()) {
        const Vector sol = lu.solve(rhs);
        if (sol.head(n).minCoeff() >= -1e-12 && sol[n] > best) {
          best = sol[n];
          Control c = Control::Zero(m);
          for (Eigen::Index k = 0; k < n; ++k) c[pick[static_cast<std::size_t>(k)]] = std::max(0.0, sol[k]);
          out = c / c.sum();
        }
      }
      // Next n-subset in lexicographic order.
      Eigen::Index i = n - 1;
      while (i >= 0 && pick[static_cast<std::size_t>(i)] == m - n + i) --i;
      if (i < 0) break;
      ++pick[static_cast<std::size_t>(i)];
      for (Eigen::Index k = i + 1; k < n; ++k) pick[static_cast<std::size_t>(k)] = pick[static_cast<std::size_t>(k - 1)] + 1;
    }
    return out;
  }

  // Pattern search; only strict improvements are accepted, so the result is
  // never worse than the seed.
  Evaluation refine(std::vector<Control>& ctrl, Evaluation cur) const {
    for (int r = 0; r < opts_.refine_rounds; ++r) {
      const double step = 0.5 * std::ldexp(1.0, -r);
      bool improved = true;
      for (int pass = 0; pass < 3 && improved; ++pass) {
        improved = false;
        for (std::size_t i = 0; i < ctrl.size(); ++i) {
          for (auto& cand : moves(ctrl[i], step)) {
            std::vector<Control> trial = ctrl;
            trial[i] = std::move(cand);
            const double cutoff = is_finite(cur.hit) ? cur.hit : kInf;
            const Evaluation e = evaluate(trial, cutoff);
            if (e.objective < cur.objective - 1e-14) {
              ctrl = std::move(trial);
              cur = e;
              improved = true;
            }
          }
        }
      }
    }
    return cur;
  }

 private:
  const Multifunction& f_;
  Vector alpha_;
  Vector beta_;
  OracleOptions opts_;
  long steps_ = 1;
  double dt_ = 0.01;
  std::vector<Control> letters_;
  Matrix vertices_;  // polytopic only
};

std::vector<int> level_chain(int stages) {
  std::vector<int> chain;
  int s = stages;
  chain.push_back(s);
  while (s % 2 == 0 && s > 1) {
    s /= 2;
    chain.push_back(s);
  }
  if (chain.back() != 1) chain.push_back(1);
  std::reverse(chain.begin(), chain.end());
  return chain;
}

std::vector<Control> embed(const std::vector<Control>& coarse, int fine_stages) {
  std::vector<Control> out;
  const auto coarse_n = static_cast<long>(coarse.size());
  for (long i = 0; i < fine_stages; ++i) out.push_back(coarse[static_cast<std::size_t>(i * coarse_n / fine_stages)]);
  return out;
}

Selection to_selection(const std::vector<Control>& ctrl, double horizon) {
  Selection sel;
  const auto n = static_cast<double>(ctrl.size());
  for (std::size_t i = 0; i < ctrl.size(); ++i) {
    sel.breakpoints.push_back(horizon * static_cast<double>(i) / n);
    sel.controls.push_back(ctrl[i]);
  }
  return sel;
}

}  // namespace

OracleResult brute_force_min_time(const Multifunction& f, const Vector& alpha, const Vector& beta,
                                  const OracleOptions& opts, const OracleResult* warm_start) {
  if (opts.stages < 1) throw InvalidArgument("oracle: stages must be at least 1");
  if (!(opts.terminal_tol > 0.0)) throw InvalidArgument("oracle: terminal tolerance must be positive");
  if (!(opts.horizon > 0.0) || !(opts.dt_max > 0.0)) throw InvalidArgument("oracle: horizon and dt must be positive");
  if (static_cast<std::size_t>(alpha.size()) != f.dim() || static_cast<std::size_t>(beta.size()) != f.dim()) {
    throw InvalidArgument("oracle: endpoint dimension mismatch");
  }

  Search search(f, alpha, beta, opts);
  const auto& letters = search.letters();
  const double a = static_cast<double>(letters.size());

  std::vector<Control> best_ctrl;
  Evaluation best;
  for (int s : level_chain(opts.stages)) {
    // Longest enumerable word length dividing s.
    int word_len = 1;
    for (int d = s; d >= 1; --d) {
      if (s % d == 0 && std::pow(a, d) <= static_cast<double>(opts.max_words)) {
        word_len = d;
        break;
      }
    }
    const auto word_count = static_cast<std::size_t>(std::llround(std::pow(a, word_len)));
    std::vector<std::pair<Evaluation, std::size_t>> coarse;
    coarse.reserve(word_count);
    std::vector<Control> ctrl(static_cast<std::size_t>(s));
    for (std::size_t w = 0; w < word_count; ++w) {
      std::size_t code = w;
      std::vector<std::size_t> word(static_cast<std::size_t>(word_len));
      for (auto& l : word) {
        l = code % letters.size();
        code /= letters.size();
      }
      for (int i = 0; i < s; ++i) ctrl[static_cast<std::size_t>(i)] = letters[word[static_cast<std::size_t>(i * word_len / s)]];
      const double cutoff = is_finite(best.hit) ? best.hit : kInf;
      coarse.emplace_back(search.evaluate(ctrl, cutoff), w);
    }
    std::stable_sort(coarse.begin(), coarse.end(),
                     [](const auto& l, const auto& r) { return l.first.objective < r.first.objective; });

    std::vector<std::pair<std::vector<Control>, Evaluation>> seeds;
    if (!best_ctrl.empty()) seeds.emplace_back(embed(best_ctrl, s), best);
    for (std::size_t i = 0; i < std::min(opts.seeds, coarse.size()); ++i) {
      std::size_t code = coarse[i].second;
      std::vector<std::size_t> word(static_cast<std::size_t>(word_len));
      for (auto& l : word) {
        l = code % letters.size();
        code /= letters.size();
      }
      std::vector<Control> c(static_cast<std::size_t>(s));
      for (int k = 0; k < s; ++k) c[static_cast<std::size_t>(k)] = letters[word[static_cast<std::size_t>(k * word_len / s)]];
      // Seeds pruned by the cutoff are re-evaluated in full so refinement
      // starts from an accurate objective.
      seeds.emplace_back(c, search.evaluate(c, kInf));
    }
    for (auto& [c, e] : seeds) {
      const Evaluation r = search.refine(c, e);
      if (best_ctrl.empty() || r.objective < best.objective) {
        best = r;
        best_ctrl = c;
      }
    }
  }

  OracleResult out;
  out.alpha = alpha;
  out.beta = beta;
  if (is_finite(best.hit)) {
    out.minimal_time = best.hit;
    Selection sel = to_selection(best_ctrl, opts.horizon);
    if (best.hit == 0.0) {
      Trajectory tr;
      tr.times = {0.0};
      tr.states = {alpha};
      tr.velocities = {velocity(f, alpha, best_ctrl.front())};
      out.witness = tr;
    } else {
      out.witness = integrate(f, alpha, sel, best.hit, std::min(search.dt(), best.hit));
    }
    out.selection = std::move(sel);
    out.terminal_error = (out.witness->end() - beta).norm();
  } else {
    out.terminal_error = best.min_dist;
  }

  if (warm_start != nullptr && warm_start->minimal_time < out.minimal_time) {
    out.minimal_time = warm_start->minimal_time;
    out.witness = warm_start->witness;
    out.selection = warm_start->selection;
    out.terminal_error = warm_start->terminal_error;
  } else if (warm_start != nullptr && !is_finite(out.minimal_time)) {
    out.terminal_error = std::min(out.terminal_error, warm_start->terminal_error);
  }
  return out;
}

}  // namespace bitime::trajectory

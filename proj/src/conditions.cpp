// Copyright 2026 The idvmech Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "idv/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <utility>

#include "idv/mechanisms.hpp"
#include "idv/parallel.hpp"

namespace idv {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRankTol = 1e-7;

// One agent's line through the grid: profiles base + k * stride.
struct Line {
  int agent = 0;
  std::size_t others = 0;
  std::size_t base = 0;
  std::size_t stride = 0;
  int size = 0;

  std::size_t at(int k) const { return base + static_cast<std::size_t>(k) * stride; }
};

struct LineResult {
  std::optional<Witness> witness;
  double slack = kInf;

  void observe(double margin) { slack = std::min(slack, margin); }
};

std::vector<Line> all_lines(const SignalGrid& grid) {
  std::vector<Line> lines;
  for (int i = 0; i < grid.agents(); ++i) {
    if (grid.size(i) < 2) continue;
    for (std::size_t o = 0; o < grid.others_count(i); ++o) {
      Line line;
      line.agent = i;
      line.others = o;
      line.base = grid.flat(grid.from_others(i, o, 0));
      line.stride = grid.stride(i);
      line.size = grid.size(i);
      lines.push_back(line);
    }
  }
  return lines;
}

// Runs `check` on every line and keeps the first witness in canonical order.
template <typename Fn>
CheckReport sweep(const Instance& instance, std::string condition, Fn&& check) {
  const auto lines = all_lines(instance.grid());
  auto results = parallel_map(lines.size(), [&](std::size_t t) { return check(lines[t]); });
  CheckReport report{std::move(condition), true, std::nullopt, 0.0};
  double slack = kInf;
  for (auto& r : results) {
    slack = std::min(slack, r.slack);
    if (r.witness && !report.witness) {
      report.verdict = false;
      report.witness = std::move(r.witness);
    }
  }
  if (report.witness) {
    report.slack = report.witness->slack;
  } else if (std::isfinite(slack)) {
    report.slack = slack;
  }
  return report;
}

Witness line_witness(const SignalGrid& grid, const Line& line, int own) {
  Witness w;
  w.agent = line.agent;
  w.profile = grid.from_others(line.agent, line.others, own);
  return w;
}

std::vector<double> diff(std::span<const double> a, std::span<const double> b) {
  std::vector<double> d(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) d[k] = a[k] - b[k];
  return d;
}

bool structurally_decomposable(const ValuationSpec& spec) {
  return std::holds_alternative<LinearValuation>(spec) ||
         std::holds_alternative<DecomposableValuation>(spec);
}

void require_decomposable(const Instance& instance, const char* what) {
  for (int i = 0; i < instance.agents(); ++i) {
    if (structurally_decomposable(instance.valuation(i))) continue;
    if (!check_decomposable(instance, i).verdict) {
      throw DomainError(std::string(what) + " requires decomposable valuations; agent " +
                        std::to_string(i) +
                        " is not decomposable (use weak-fsc instead)");
    }
  }
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

// --- Single-crossing ----------------------------------------------------------

CheckReport check_single_crossing(const Instance& instance) {
  const int n = instance.agents();
  const OutcomeSet& outcomes = instance.outcomes();
  if (outcomes.projects() != n || outcomes.max_size() != 1) {
    throw DomainError("single-crossing: instance is not single-dimensional (need m = n, k = 1)");
  }
  std::vector<int> win(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) win[static_cast<std::size_t>(i)] = outcomes.index_of({i});
  const SignalGrid& grid = instance.grid();
  for (std::size_t p = 0; p < grid.profile_count(); ++p) {
    const GridProfile profile = grid.unflat(p);
    for (int i = 0; i < n; ++i) {
      for (int a = 0; a < outcomes.size(); ++a) {
        if (a == win[static_cast<std::size_t>(i)]) continue;
        if (std::abs(instance.value(i, a, profile)) > kTol) {
          throw DomainError("single-crossing: agent " + std::to_string(i) +
                            " values outcome " + outcome_label(outcomes.at(a)) +
                            " it does not win; instance is not single-dimensional");
        }
      }
    }
  }

  CheckReport report{"single_crossing", true, std::nullopt, 0.0};
  double slack = kInf;
  for (std::size_t p = 0; p < grid.profile_count() && !report.witness; ++p) {
    const GridProfile profile = grid.unflat(p);
    for (int i = 0; i < n && !report.witness; ++i) {
      if (grid.size(i) < 2) continue;
      const double own = partial_derivative(instance, i, win[static_cast<std::size_t>(i)], profile, i);
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const double other =
            partial_derivative(instance, j, win[static_cast<std::size_t>(j)], profile, i);
        const double margin = own - other;
        slack = std::min(slack, margin);
        if (margin < -kTol) {
          Witness w;
          w.agent = i;
          w.other_agent = j;
          w.profile = profile;
          w.slack = margin;
          w.detail = "agent " + std::to_string(j) + "'s value rises faster in s_" +
                     std::to_string(i) + " than agent " + std::to_string(i) + "'s own";
          report.verdict = false;
          report.witness = w;
          break;
        }
      }
    }
  }
  report.slack = report.witness ? report.witness->slack : (std::isfinite(slack) ? slack : 0.0);
  return report;
}

// --- Strong single-crossing -----------------------------------------------------

CheckReport check_strong_single_crossing(const Instance& instance) {
  require_decomposable(instance, "strong single-crossing");
  const SocialChoiceFunction f = welfare_max_scf(instance);
  const SignalGrid& grid = instance.grid();
  const int n = instance.agents();
  return sweep(instance, "strong_single_crossing", [&](const Line& line) {
    LineResult result;
    std::set<int> chosen;
    for (int k = 0; k < line.size; ++k) chosen.insert(f.point(line.at(k)));
    if (chosen.size() < 2) return result;
    const std::vector<int> r(chosen.begin(), chosen.end());
    for (int k = 0; k < line.size && !result.witness; ++k) {
      const GridProfile profile = grid.from_others(line.agent, line.others, k);
      std::vector<double> own(r.size()), wel(r.size(), 0.0);
      for (std::size_t x = 0; x < r.size(); ++x) {
        own[x] = partial_derivative(instance, line.agent, r[x], profile, line.agent);
        for (int j = 0; j < n; ++j) {
          wel[x] += partial_derivative(instance, j, r[x], profile, line.agent);
        }
      }
      for (std::size_t x = 0; x < r.size() && !result.witness; ++x) {
        for (std::size_t y = 0; y < r.size(); ++y) {
          if (!(wel[x] < wel[y] - kTol)) continue;
          const double margin = own[y] - own[x];
          result.observe(margin);
          if (margin < -kTol) {
            Witness w = line_witness(grid, line, k);
            w.outcomes = {r[x], r[y]};
            w.slack = margin;
            w.detail = "welfare slope orders " + outcome_label(instance.outcomes().at(r[x])) +
                       " below " + outcome_label(instance.outcomes().at(r[y])) +
                       " but the agent's own slope reverses them";
            result.witness = w;
            break;
          }
        }
      }
    }
    return result;
  });
}

// --- f-single-crossing ------------------------------------------------------------

CheckReport check_f_single_crossing(const Instance& instance, const SocialChoiceFunction& f) {
  require_compatible(instance, f);
  require_decomposable(instance, "f-single-crossing");
  const SignalGrid& grid = instance.grid();
  return sweep(instance, "f_single_crossing", [&](const Line& line) {
    LineResult result;
    for (int k = 0; k + 1 < line.size && !result.witness; ++k) {
      const GridProfile profile = grid.from_others(line.agent, line.others, k);
      const std::vector<double> slope = slope_vector(instance, line.agent, profile, line.agent);
      const double base = inner(slope, f.at(line.at(k)));
      for (int l = k + 1; l < line.size; ++l) {
        const double margin = inner(slope, f.at(line.at(l))) - base;
        result.observe(margin);
        if (margin < -kTol) {
          Witness w = line_witness(grid, line, k);
          w.upper = grid.from_others(line.agent, line.others, l);
          w.own = {k, l};
          w.slack = margin;
          w.detail = "raising the signal moves f toward outcomes with a smaller own slope";
          result.witness = w;
          break;
        }
      }
    }
    return result;
  });
}

CheckReport check_weak_f_single_crossing(const Instance& instance,
                                         const SocialChoiceFunction& f) {
  require_compatible(instance, f);
  const ValueTable values(instance);
  const SignalGrid& grid = instance.grid();
  return sweep(instance, "weak_f_single_crossing", [&](const Line& line) {
    LineResult result;
    const auto K = static_cast<std::size_t>(line.size);
    // u[k] = integral from the bottom of the line to point k.
    std::vector<double> u(K, 0.0);
    for (std::size_t k = 0; k + 1 < K; ++k) {
      const auto step = diff(values.row(line.agent, line.at(static_cast<int>(k) + 1)),
                             values.row(line.agent, line.at(static_cast<int>(k))));
      u[k + 1] = u[k] + inner(step, f.at(line.at(static_cast<int>(k))));
    }
    for (int p = 0; p < line.size && !result.witness; ++p) {
      const auto vp = values.row(line.agent, line.at(p));
      for (int q = 0; q < line.size; ++q) {
        if (q == p) continue;
        const auto gain = diff(values.row(line.agent, line.at(q)), vp);
        const double margin = inner(gain, f.at(line.at(q))) -
                              (u[static_cast<std::size_t>(q)] - u[static_cast<std::size_t>(p)]);
        result.observe(margin);
        if (margin < -kTol) {
          Witness w = line_witness(grid, line, p);
          w.upper = grid.from_others(line.agent, line.others, q);
          w.own = {p, q};
          w.slack = margin;
          w.detail = "value gain at f(z) falls short of the integral from s_i to z";
          result.witness = w;
          break;
        }
      }
    }
    return result;
  });
}

// --- W-Mon / C-Mon --------------------------------------------------------------

CheckReport check_wmon(const Instance& instance, const SocialChoiceFunction& f) {
  require_compatible(instance, f);
  const ValueTable values(instance);
  const SignalGrid& grid = instance.grid();
  return sweep(instance, "wmon", [&](const Line& line) {
    LineResult result;
    for (int p = 0; p < line.size && !result.witness; ++p) {
      for (int q = p + 1; q < line.size; ++q) {
        const auto dv = diff(values.row(line.agent, line.at(q)), values.row(line.agent, line.at(p)));
        const auto df = diff(f.at(line.at(q)), f.at(line.at(p)));
        const double margin = inner(dv, df);
        result.observe(margin);
        if (margin < -kTol) {
          Witness w = line_witness(grid, line, p);
          w.upper = grid.from_others(line.agent, line.others, q);
          w.own = {p, q};
          w.slack = margin;
          w.detail = "<v(s') - v(s), f(s') - f(s)> is negative";
          result.witness = w;
          break;
        }
      }
    }
    return result;
  });
}

CheckReport check_cmon(const Instance& instance, const SocialChoiceFunction& f) {
  require_compatible(instance, f);
  const ValueTable values(instance);
  const SignalGrid& grid = instance.grid();
  return sweep(instance, "cmon", [&](const Line& line) {
    LineResult result;
    const int K = line.size;
    const auto idx = [K](int p, int q) { return static_cast<std::size_t>(p * K + q); };
    // w(p -> q) = <v(p), f(p) - f(q)>: the gain type p forgoes by reporting q.
    std::vector<double> weight(static_cast<std::size_t>(K * K), 0.0);
    for (int p = 0; p < K; ++p) {
      const auto vp = values.row(line.agent, line.at(p));
      const auto fp = f.at(line.at(p));
      for (int q = 0; q < K; ++q) {
        if (p != q) weight[idx(p, q)] = inner(vp, diff(fp, f.at(line.at(q))));
      }
    }
    // Bellman-Ford from a virtual source. Every edge is lifted by kTol / 2 so
    // only cycles that are negative by more than the tolerance register.
    const double lift = kTol / 2;
    std::vector<double> dist(static_cast<std::size_t>(K), 0.0);
    std::vector<int> pred(static_cast<std::size_t>(K), -1);
    int touched = -1;
    for (int round = 0; round < K; ++round) {
      touched = -1;
      for (int p = 0; p < K; ++p) {
        for (int q = 0; q < K; ++q) {
          if (p == q) continue;
          const double cand = dist[static_cast<std::size_t>(p)] + weight[idx(p, q)] + lift;
          if (cand < dist[static_cast<std::size_t>(q)]) {
            dist[static_cast<std::size_t>(q)] = cand;
            pred[static_cast<std::size_t>(q)] = p;
            touched = q;
          }
        }
      }
      if (touched < 0) break;
    }
    if (touched >= 0) {
      // Walking K predecessors from a node relaxed in the last round lands
      // on the cycle.
      int x = touched;
      for (int step = 0; step < K; ++step) x = pred[static_cast<std::size_t>(x)];
      std::vector<int> cycle{x};
      for (int y = pred[static_cast<std::size_t>(x)]; y != x && static_cast<int>(cycle.size()) <= K;
           y = pred[static_cast<std::size_t>(y)]) {
        cycle.push_back(y);
      }
      std::reverse(cycle.begin(), cycle.end());
      std::rotate(cycle.begin(), std::min_element(cycle.begin(), cycle.end()), cycle.end());
      double total = 0.0;
      for (std::size_t c = 0; c < cycle.size(); ++c) {
        total += weight[idx(cycle[c], cycle[(c + 1) % cycle.size()])];
      }
      Witness w = line_witness(grid, line, cycle.front());
      w.own = cycle;
      w.slack = total;
      w.detail = "negative cycle in the deviation graph";
      result.witness = w;
      result.observe(total);
      return result;
    }
    // No negative cycle: the minimum cycle weight is the margin.
    std::vector<double> d = weight;
    for (int p = 0; p < K; ++p) d[idx(p, p)] = kInf;
    for (int m = 0; m < K; ++m) {
      for (int p = 0; p < K; ++p) {
        for (int q = 0; q < K; ++q) {
          d[idx(p, q)] = std::min(d[idx(p, q)], d[idx(p, m)] + d[idx(m, q)]);
        }
      }
    }
    for (int p = 0; p < K; ++p) result.observe(d[idx(p, p)]);
    return result;
  });
}

// --- Decomposability -------------------------------------------------------------

Decomposition detect_decomposable(const Instance& instance, int agent, std::size_t others_index) {
  const SignalGrid& grid = instance.grid();
  if (agent < 0 || agent >= instance.agents() || others_index >= grid.others_count(agent)) {
    throw DomainError("detect_decomposable: agent or s_-i index out of range");
  }
  const int K = grid.size(agent);
  const int mu = instance.outcomes().size();
  std::vector<std::vector<double>> curve(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    const GridProfile profile = grid.from_others(agent, others_index, k);
    auto& row = curve[static_cast<std::size_t>(k)];
    row.resize(static_cast<std::size_t>(mu));
    for (int a = 0; a < mu; ++a) row[static_cast<std::size_t>(a)] = instance.value(agent, a, profile);
  }
  std::vector<std::vector<double>> u(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) u[static_cast<std::size_t>(k)] = diff(curve[static_cast<std::size_t>(k)], curve[0]);

  Decomposition out;
  // Reference direction: the full span of the curve, or the largest step
  // away from the base when the curve returns to its start.
  int ref = K - 1;
  if (max_abs(u[static_cast<std::size_t>(ref)]) <= kTol) {
    for (int k = 0; k < K; ++k) {
      if (max_abs(u[static_cast<std::size_t>(k)]) > max_abs(u[static_cast<std::size_t>(ref)])) ref = k;
    }
  }
  std::vector<double> d = u[static_cast<std::size_t>(ref)];
  if (max_abs(d) <= kTol) {
    // Constant curve.
    out.decomposable = true;
    out.vhat = grid.points(agent);
    out.h.assign(static_cast<std::size_t>(mu), 0.0);
    out.g = curve[0];
    return out;
  }
  const Witness base = [&] {
    Witness w;
    w.agent = agent;
    w.profile = grid.from_others(agent, others_index, 0);
    return w;
  }();
  // h must keep one sign across outcomes.
  int pos = -1, neg = -1;
  for (int a = 0; a < mu; ++a) {
    if (d[static_cast<std::size_t>(a)] > kTol && pos < 0) pos = a;
    if (d[static_cast<std::size_t>(a)] < -kTol && neg < 0) neg = a;
  }
  if (pos >= 0 && neg >= 0) {
    Witness w = base;
    w.own = {0, ref};
    w.outcomes = {pos, neg};
    w.slack = d[static_cast<std::size_t>(neg)];
    w.detail = "the value curve rises for one outcome and falls for another";
    out.witness = w;
    return out;
  }
  const double sign = pos >= 0 ? 1.0 : -1.0;
  const double dd = inner(d, d);
  std::vector<double> c(static_cast<std::size_t>(K), 0.0);
  for (int k = 0; k < K; ++k) {
    const auto& uk = u[static_cast<std::size_t>(k)];
    c[static_cast<std::size_t>(k)] = inner(uk, d) / dd;
    double residual = 0.0;
    for (int a = 0; a < mu; ++a) {
      residual = std::max(residual, std::abs(uk[static_cast<std::size_t>(a)] -
                                             c[static_cast<std::size_t>(k)] * d[static_cast<std::size_t>(a)]));
    }
    const double scale = std::max({1.0, max_abs(uk), max_abs(d)});
    if (residual > kRankTol * scale) {
      // Largest 2x2 minor of [u_k d].
      double best = -1.0;
      int ba = 0, bb = 1;
      for (int a = 0; a < mu; ++a) {
        for (int b = a + 1; b < mu; ++b) {
          const double minor = uk[static_cast<std::size_t>(a)] * d[static_cast<std::size_t>(b)] -
                               uk[static_cast<std::size_t>(b)] * d[static_cast<std::size_t>(a)];
          if (std::abs(minor) > best) {
            best = std::abs(minor);
            ba = a;
            bb = b;
          }
        }
      }
      Witness w = base;
      w.own = {0, k, ref};
      w.outcomes = {ba, bb};
      w.slack = -best;
      w.detail = "difference vectors of the value curve are not parallel";
      out.witness = w;
      return out;
    }
  }
  const double cmin = *std::min_element(c.begin(), c.end()) * sign;
  out.decomposable = true;
  out.vhat.resize(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) out.vhat[static_cast<std::size_t>(k)] = sign * c[static_cast<std::size_t>(k)] - cmin;
  out.h.resize(static_cast<std::size_t>(mu));
  out.g.resize(static_cast<std::size_t>(mu));
  for (int a = 0; a < mu; ++a) {
    const auto s = static_cast<std::size_t>(a);
    out.h[s] = sign * d[s];
    out.g[s] = curve[0][s] + cmin * out.h[s];
  }
  return out;
}

CheckReport check_decomposable(const Instance& instance, int agent) {
  CheckReport report{"decomposable", true, std::nullopt, 0.0};
  const std::size_t others = instance.grid().others_count(agent);
  auto results = parallel_map(others, [&](std::size_t o) { return detect_decomposable(instance, agent, o); });
  for (auto& r : results) {
    if (!r.decomposable) {
      report.verdict = false;
      report.witness = r.witness;
      report.slack = r.witness ? r.witness->slack : 0.0;
      break;
    }
  }
  return report;
}

CheckReport check_decomposable(const Instance& instance) {
  for (int i = 0; i < instance.agents(); ++i) {
    CheckReport r = check_decomposable(instance, i);
    if (!r.verdict) return r;
  }
  return {"decomposable", true, std::nullopt, 0.0};
}

// --- SOS ---------------------------------------------------------------------------

CheckReport check_sos(const SignalGrid& grid, const GridFunction& fn, const SosOptions& options) {
  CheckReport report{"sos", true, std::nullopt, 0.0};
  const int n = grid.agents();
  double slack = kInf;
  auto fail = [&](GridProfile lower, GridProfile upper, int i, int j, int from, int to, double margin) {
    Witness w;
    w.agent = i;
    w.other_agent = j;
    w.profile = std::move(lower);
    w.upper = std::move(upper);
    w.own = {from, to};
    w.slack = margin;
    w.detail = "raising s_" + std::to_string(i) + " gains more at the higher profile";
    report.verdict = false;
    report.witness = w;
  };

  if (grid.profile_count() <= options.exhaustive_limit) {
    // Adjacent form: each one-step increment in s_i must not grow under a
    // one-step rise of any other s_j. Chaining gives every ordered pair.
    for (std::size_t p = 0; p < grid.profile_count() && !report.witness; ++p) {
      const GridProfile x = grid.unflat(p);
      for (int i = 0; i < n && !report.witness; ++i) {
        const int xi = x[static_cast<std::size_t>(i)];
        if (xi + 1 >= grid.size(i)) continue;
        GridProfile xu = x;
        xu[static_cast<std::size_t>(i)] += 1;
        const double low = fn(xu) - fn(x);
        for (int j = 0; j < n; ++j) {
          if (j == i || x[static_cast<std::size_t>(j)] + 1 >= grid.size(j)) continue;
          GridProfile y = x;
          y[static_cast<std::size_t>(j)] += 1;
          GridProfile yu = y;
          yu[static_cast<std::size_t>(i)] += 1;
          const double margin = low - (fn(yu) - fn(y));
          slack = std::min(slack, margin);
          if (margin < -kTol) {
            fail(x, y, i, j, xi, xi + 1, margin);
            break;
          }
        }
      }
    }
  } else {
    std::mt19937_64 rng(options.seed);
    auto draw = [&rng](int lo, int hi) {  // uniform on [lo, hi]
      return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
    };
    std::vector<int> movable;
    for (int i = 0; i < n; ++i) {
      if (grid.size(i) >= 2) movable.push_back(i);
    }
    for (std::size_t t = 0; t < options.samples && !movable.empty() && !report.witness; ++t) {
      const int i = movable[static_cast<std::size_t>(draw(0, static_cast<int>(movable.size()) - 1))];
      GridProfile s(static_cast<std::size_t>(n)), s2(static_cast<std::size_t>(n));
      for (int j = 0; j < n; ++j) {
        s[static_cast<std::size_t>(j)] = draw(0, grid.size(j) - 1);
        s2[static_cast<std::size_t>(j)] = draw(s[static_cast<std::size_t>(j)], grid.size(j) - 1);
      }
      s[static_cast<std::size_t>(i)] = draw(0, grid.size(i) - 2);
      s2[static_cast<std::size_t>(i)] = s[static_cast<std::size_t>(i)];
      const int up = draw(s[static_cast<std::size_t>(i)] + 1, grid.size(i) - 1);
      GridProfile su = s, s2u = s2;
      su[static_cast<std::size_t>(i)] = up;
      s2u[static_cast<std::size_t>(i)] = up;
      const double margin = (fn(su) - fn(s)) - (fn(s2u) - fn(s2));
      slack = std::min(slack, margin);
      if (margin < -kTol) fail(s, s2, i, -1, s[static_cast<std::size_t>(i)], up, margin);
    }
  }
  report.slack = report.witness ? report.witness->slack : (std::isfinite(slack) ? slack : 0.0);
  return report;
}

CheckReport check_sos(const Instance& instance, int agent, int outcome, const SosOptions& options) {
  if (agent < 0 || agent >= instance.agents() || outcome < 0 ||
      outcome >= instance.outcomes().size()) {
    throw DomainError("check_sos: agent or outcome index out of range");
  }
  CheckReport r = check_sos(
      instance.grid(),
      [&](std::span<const int> profile) { return instance.value(agent, outcome, profile); },
      options);
  if (r.witness) r.witness->outcomes = {outcome};
  return r;
}

CheckReport check_separable_sos(const Instance& instance) {
  const SignalGrid& grid = instance.grid();
  const int n = instance.agents();
  const int mu = instance.outcomes().size();
  for (int i = 0; i < n; ++i) {
    if (!std::holds_alternative<SeparableSosValuation>(instance.valuation(i))) {
      throw DomainError("separable-sos: agent " + std::to_string(i) + " uses the " +
                        variant_name(instance.valuation(i)) + " variant, expected separable_sos");
    }
  }
  CheckReport report{"separable_sos", true, std::nullopt, 0.0};
  double slack = kInf;
  auto fail = [&](Witness w) {
    report.verdict = false;
    report.slack = w.slack;
    report.witness = std::move(w);
  };

  for (int i = 0; i < n; ++i) {
    const auto& v = std::get<SeparableSosValuation>(instance.valuation(i));
    // Grid of the other agents; its flat order matches others_flat(i, .).
    std::vector<std::vector<double>> rest;
    for (int j = 0; j < n; ++j) {
      if (j != i) rest.push_back(grid.points(j));
    }
    auto expand = [&](std::span<const int> sub, int own) {
      GridProfile full(static_cast<std::size_t>(n));
      for (int j = 0, s = 0; j < n; ++j) {
        full[static_cast<std::size_t>(j)] = j == i ? own : sub[static_cast<std::size_t>(s++)];
      }
      return full;
    };
    for (int a = 0; a < mu; ++a) {
      const auto& h = v.h[static_cast<std::size_t>(a)];
      for (int k = 0; k + 1 < grid.size(i); ++k) {
        const double delta = h[static_cast<std::size_t>(k) + 1] - h[static_cast<std::size_t>(k)];
        slack = std::min(slack, delta);
        if (delta < -kTol) {
          Witness w;
          w.agent = i;
          w.profile = grid.from_others(i, 0, k);
          w.own = {k, k + 1};
          w.outcomes = {a};
          w.slack = delta;
          w.detail = "h decreases in the agent's own signal";
          fail(w);
          return report;
        }
      }
      if (rest.empty()) continue;
      const SignalGrid sub(rest);
      const auto& g = v.g[static_cast<std::size_t>(a)];
      for (std::size_t p = 0; p < sub.profile_count(); ++p) {
        const GridProfile x = sub.unflat(p);
        for (int j = 0; j < sub.agents(); ++j) {
          if (x[static_cast<std::size_t>(j)] + 1 >= sub.size(j)) continue;
          GridProfile y = x;
          y[static_cast<std::size_t>(j)] += 1;
          const double delta = g[sub.flat(y)] - g[p];
          slack = std::min(slack, delta);
          if (delta < -kTol) {
            Witness w;
            w.agent = j < i ? j : j + 1;
            w.other_agent = i;
            w.profile = expand(x, 0);
            w.upper = expand(y, 0);
            w.outcomes = {a};
            w.slack = delta;
            w.detail = "g decreases in another agent's signal";
            fail(w);
            return report;
          }
        }
      }
      CheckReport sos = check_sos(sub, [&](std::span<const int> x) { return g[sub.flat(x)]; });
      slack = std::min(slack, sos.slack);
      if (!sos.verdict) {
        Witness w = *sos.witness;
        w.agent = w.agent < i ? w.agent : w.agent + 1;
        if (w.other_agent >= 0) w.other_agent = w.other_agent < i ? w.other_agent : w.other_agent + 1;
        w.profile = expand(w.profile, 0);
        w.upper = expand(w.upper, 0);
        w.outcomes = {a};
        w.detail = "g of agent " + std::to_string(i) + " is not submodular over signals";
        fail(w);
        return report;
      }
    }
  }
  report.slack = std::isfinite(slack) ? slack : 0.0;
  return report;
}

}  // namespace idv

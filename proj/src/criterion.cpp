#include "netform/criterion.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "netform/kernels.hpp"

namespace netform {

std::size_t BoundTable::total_records() const {
  std::size_t s = 0;
  for (const auto& g : groups)
    for (const auto& c : g.cells) s += c.pat.size() + c.flip.size();
  return s;
}

std::size_t BoundTable::active_cells(std::uint64_t cell_min) const {
  std::size_t s = 0;
  for (const auto& g : groups)
    for (const auto& c : g.cells) s += c.count >= cell_min ? 1 : 0;
  return s;
}

namespace {

std::string key_str(const std::vector<double>& gk,
                    const std::vector<double>& ck) {
  std::ostringstream os;
  os << "zR=(";
  for (std::size_t i = 0; i < gk.size(); ++i) os << (i ? "," : "") << gk[i];
  os << ") z0=(";
  for (std::size_t i = 0; i < ck.size(); ++i) os << (i ? "," : "") << ck[i];
  os << ")";
  return os.str();
}

struct Event {
  double value;
  std::uint32_t cell;
  bool is_pat;
};

struct GroupSweep {
  // active cells only
  std::vector<std::uint64_t> count;
  std::vector<std::uint64_t> nflip;
  std::vector<Event> events;
  std::vector<const ProfileCell*> src;
};

GroupSweep prepare_group(const RetainedGroup& g, double gamma,
                         std::uint64_t cell_min) {
  GroupSweep s;
  std::vector<double> vals;
  for (const auto& cell : g.cells) {
    if (cell.count < cell_min) continue;
    const auto idx = static_cast<std::uint32_t>(s.count.size());
    s.count.push_back(cell.count);
    s.nflip.push_back(cell.flip.size());
    s.src.push_back(&cell);
    for (const std::vector<BoundRecord>* recs : {&cell.pat, &cell.flip}) {
      const bool is_pat = recs == &cell.pat;
      if (recs->empty()) continue;
      std::vector<double> a(recs->size()), b(recs->size());
      for (std::size_t m = 0; m < recs->size(); ++m) {
        a[m] = (*recs)[m].a;
        b[m] = (*recs)[m].b;
      }
      vals.resize(recs->size());
      kernels::ops().axpy_eval(a.data(), b.data(), gamma, vals.data(),
                               vals.size());
      for (double v : vals) s.events.push_back({v, idx, is_pat});
    }
  }
  std::sort(s.events.begin(), s.events.end(), [](const Event& x, const Event& y) {
    if (x.value != y.value) return x.value < y.value;
    if (x.cell != y.cell) return x.cell < y.cell;
    return x.is_pat < y.is_pat;
  });
  return s;
}

struct SweepState {
  std::vector<std::uint64_t> pat_seen;
  std::vector<std::uint64_t> flip_left;
  std::vector<double> p_upper;
  std::multiset<double> uppers;
  double max_pl = 0.0;

  explicit SweepState(const GroupSweep& g)
      : pat_seen(g.count.size(), 0), flip_left(g.nflip) {
    p_upper.resize(g.count.size());
    for (std::size_t i = 0; i < g.count.size(); ++i) {
      p_upper[i] = 1.0 - static_cast<double>(g.nflip[i]) /
                             static_cast<double>(g.count[i]);
      uppers.insert(p_upper[i]);
    }
  }
  double min_pu() const { return uppers.empty() ? 1.0 : *uppers.begin(); }

  void apply(const GroupSweep& g, const Event& e) {
    const auto i = e.cell;
    if (e.is_pat) {
      ++pat_seen[i];
      max_pl = std::max(max_pl, static_cast<double>(pat_seen[i]) /
                                    static_cast<double>(g.count[i]));
    } else {
      uppers.erase(uppers.find(p_upper[i]));
      --flip_left[i];
      p_upper[i] = 1.0 - static_cast<double>(flip_left[i]) /
                             static_cast<double>(g.count[i]);
      uppers.insert(p_upper[i]);
    }
  }
};

template <typename Candidate>
void sweep_group(const GroupSweep& g, Candidate&& candidate) {
  // candidate(c, A_before, B_before, A_after, B_after) at each breakpoint;
  // callers read the pieces they need.
  SweepState st(g);
  const double b0 = st.min_pu();
  candidate(-std::numeric_limits<double>::infinity(), 0.0, b0, 0.0, b0);
  std::size_t i = 0;
  while (i < g.events.size()) {
    const double c = g.events[i].value;
    const double a_before = st.max_pl, b_before = st.min_pu();
    while (i < g.events.size() && g.events[i].value == c)
      st.apply(g, g.events[i++]);
    candidate(c, a_before, b_before, st.max_pl, st.min_pu());
  }
}

}  // namespace

CriterionResult criterion_nonparametric(const BoundTable& table, double gamma,
                                        const CriterionOptions& opt) {
  CriterionResult r;
  r.q = -1.0;  // Q >= A - B >= 0 - 1
  for (const auto& g : table.groups) {
    GroupSweep sw = prepare_group(g, gamma, opt.cell_min);
    if (sw.count.empty()) continue;
    sweep_group(sw, [&](double c, double, double, double a_after,
                        double b_after) {
      const double v = a_after - b_after;
      if (v > r.q) {
        r.q = v;
        r.binding_c = c;
        r.binding_cell = key_str(g.key, {});
        r.lower_side = true;
      }
    });
  }
  r.in_identified_set = r.q <= 0.0;
  return r;
}

CriterionResult criterion_parametric(const BoundTable& table, double gamma,
                                     const DeltaDistribution& fdelta,
                                     const CriterionOptions& opt) {
  CriterionResult r;
  std::vector<double> qcs;
  for (double p = opt.quantile_lo; p < 1.0 - opt.quantile_lo / 2;
       p += opt.quantile_step)
    qcs.push_back(fdelta.quantile(p));

  auto F = [&](double c) {
    return std::clamp(fdelta.cdf(c), opt.f_floor, 1.0 - opt.f_floor);
  };

  bool any_group = false;
  for (const auto& g : table.groups) {
    GroupSweep sw = prepare_group(g, gamma, opt.cell_min);
    if (sw.count.empty()) continue;
    any_group = true;

    auto consider = [&](double v, double c, bool lower) {
      if (v > r.q) {
        r.q = v;
        r.binding_c = c;
        r.binding_cell = key_str(g.key, {});
        r.lower_side = lower;
      }
    };

    // quantile-grid candidates against the running step functions are folded
    // in after the breakpoint sweep via a second pass over sorted events.
    double prev_b = 1.0;
    bool have_prev = false;
    double last_a = 0.0, last_b = 1.0;
    sweep_group(sw, [&](double c, double, double b_before, double a_after,
                        double b_after) {
      if (std::isfinite(c)) {
        consider(F(c) - b_before, c, false);
        consider(a_after - F(c), c, true);
      } else {
        have_prev = true;
      }
      prev_b = b_before;
      last_a = a_after;
      last_b = b_after;
    });
    (void)have_prev;
    (void)prev_b;
    // Right tail: F -> 1 while B sits at its final value.
    consider((1.0 - opt.f_floor) - last_b,
             std::numeric_limits<double>::infinity(), false);

    // Quantile candidates: evaluate A and B at each quantile c by replaying
    // the sweep against the merged grid.
    SweepState st(sw);
    std::size_t ev = 0;
    for (double c : qcs) {
      while (ev < sw.events.size() && sw.events[ev].value <= c)
        st.apply(sw, sw.events[ev++]);
      consider(st.max_pl - F(c), c, true);
      consider(F(c) - st.min_pu(), c, false);
    }
  }
  if (!any_group) {
    // no data cells: quantile grid alone, with A = 0, B = 1
    for (double c : qcs) {
      const double v = std::max(0.0 - F(c), F(c) - 1.0);
      if (v > r.q) {
        r.q = v;
        r.binding_c = c;
      }
    }
  }
  r.in_identified_set = r.q <= 0.0;
  return r;
}

std::vector<CellBounds> evaluate_bounds(const BoundTable& table, double gamma,
                                        double c, std::uint64_t cell_min) {
  std::vector<CellBounds> out;
  std::vector<double> vals;
  for (const auto& g : table.groups)
    for (const auto& cell : g.cells) {
      if (cell.count < cell_min) continue;
      CellBounds cb;
      cb.cell_key = cell.key;
      cb.group_key = g.key;
      cb.count = cell.count;
      std::size_t np = 0, nf = 0;
      for (const auto& rec : cell.pat) np += (rec.a + gamma * rec.b) <= c;
      for (const auto& rec : cell.flip) nf += (rec.a + gamma * rec.b) > c;
      cb.p_lower = static_cast<double>(np) / static_cast<double>(cell.count);
      cb.p_upper =
          1.0 - static_cast<double>(nf) / static_cast<double>(cell.count);
      out.push_back(std::move(cb));
    }
  return out;
}

IdentifiedSet summarize_grid(const std::vector<GridPoint>& points) {
  IdentifiedSet s;
  s.points = points;
  std::size_t i = 0;
  while (i < points.size()) {
    if (!points[i].in_set) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < points.size() && points[j + 1].in_set) ++j;
    s.intervals.push_back({points[i].gamma, points[j].gamma, i == 0,
                           j + 1 == points.size()});
    i = j + 1;
  }
  return s;
}

}  // namespace netform

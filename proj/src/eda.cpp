#include "epos/eda.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include "epos/error.hpp"
#include "epos/io.hpp"

namespace epos {

namespace {

bool is_integral(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == std::floor(x); });
}

}  // namespace

std::vector<Bin> bin_stats(const std::vector<double>& values, const std::vector<int>& labels, int num_bins) {
  if (num_bins < 1) throw ValidationError("num_bins must be >= 1");
  if (values.size() != labels.size()) throw ValidationError("values and labels differ in length");
  if (values.empty()) return {};
  const auto [mn_it, mx_it] = std::minmax_element(values.begin(), values.end());
  const double mn = *mn_it;
  const double mx = *mx_it;
  std::vector<Bin> bins;
  if (mn == mx) {
    bins.push_back({mn, mx});
  } else if (is_integral(values) && mx - mn + 1 <= num_bins) {
    for (double k = mn; k <= mx; k += 1.0) bins.push_back({k, k});
  } else {
    const double w = (mx - mn) / num_bins;
    for (int i = 0; i < num_bins; ++i) bins.push_back({mn + i * w, i + 1 == num_bins ? mx : mn + (i + 1) * w});
  }
  for (std::size_t r = 0; r < values.size(); ++r) {
    std::size_t k = 0;
    if (bins.size() > 1) {
      if (bins.front().lo == bins.front().hi) {
        k = static_cast<std::size_t>(values[r] - mn);
      } else {
        k = std::min(bins.size() - 1, static_cast<std::size_t>((values[r] - mn) / (mx - mn) * num_bins));
      }
    }
    ++bins[k].count;
    bins[k].positives += labels[r] ? 1 : 0;
  }
  for (Bin& b : bins) b.positive_rate = b.count ? static_cast<double>(b.positives) / static_cast<double>(b.count) : 0.0;
  return bins;
}

std::string bin_table_csv(const Dataset& ds, const std::vector<std::string>& features, int num_bins) {
  std::string out = "feature,bin_lo,bin_hi,count,positive_rate\n";
  for (const auto& f : features) {
    for (const Bin& b : bin_stats(ds.column_values(f), ds.labels, num_bins)) {
      out += f + "," + format_double(b.lo) + "," + format_double(b.hi) + "," + std::to_string(b.count) + "," +
             format_double(b.positive_rate) + "\n";
    }
  }
  return out;
}

std::size_t default_min_support(std::size_t dataset_size) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(0.01 * static_cast<double>(dataset_size))));
}

BoxCount evaluate_box(const Dataset& ds, const std::vector<Clause>& clauses, int target) {
  std::vector<std::size_t> cols;
  for (const Clause& c : clauses) cols.push_back(ds.column(c.feature));
  BoxCount bc;
  for (std::size_t r = 0; r < ds.size(); ++r) {
    bool in = true;
    for (std::size_t i = 0; i < clauses.size() && in; ++i) {
      const double v = ds.features(r, cols[i]);
      in = v >= clauses[i].lo && v <= clauses[i].hi;
    }
    if (!in) continue;
    ++bc.support;
    bc.positives += ds.labels[r] == target ? 1 : 0;
  }
  return bc;
}

namespace {

struct Column {
  std::string name;
  const double* base = nullptr;  // strided view into the feature matrix
  std::size_t stride = 0;
  std::vector<double> distinct;  // sorted observed values

  double at(std::size_t r) const { return base[r * stride]; }
  std::size_t rank(double v) const {
    return static_cast<std::size_t>(std::lower_bound(distinct.begin(), distinct.end(), v) - distinct.begin());
  }
};

// Subsample of the sorted values keeping both extremes.
std::vector<double> cut_values(std::vector<double> sorted_distinct, std::size_t max_cuts) {
  if (sorted_distinct.size() <= max_cuts || max_cuts < 2) return sorted_distinct;
  std::vector<double> out;
  const std::size_t m = sorted_distinct.size();
  for (std::size_t i = 0; i < max_cuts; ++i) out.push_back(sorted_distinct[i * (m - 1) / (max_cuts - 1)]);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Rows are bucketed at 2j (== cut j) or 2j+1 (strictly between cuts j and j+1),
// so [cut a, cut b] covers buckets 2a..2b.
std::size_t bucket(const std::vector<double>& cuts, double v) {
  const auto it = std::lower_bound(cuts.begin(), cuts.end(), v);
  const auto j = static_cast<std::size_t>(it - cuts.begin());
  if (it != cuts.end() && *it == v) return 2 * j;
  return 2 * j - 1;
}

class Miner {
 public:
  Miner(const Dataset& ds, const std::vector<std::string>& candidates, const MiningConfig& cfg, int target)
      : ds_(ds), cfg_(cfg) {
    if (candidates.empty()) throw ValidationError("conjecture mining needs at least one candidate feature");
    if (cfg.max_clauses < 1) throw ValidationError("max_clauses must be >= 1");
    if (std::set<std::string>(candidates.begin(), candidates.end()).size() != candidates.size())
      throw ValidationError("candidate features must be distinct");
    for (const auto& name : candidates) {
      Column c;
      c.name = name;
      const std::size_t idx = ds.column(name);
      c.base = ds.features.data.data() + idx;
      c.stride = ds.features.cols;
      c.distinct.reserve(ds.size());
      for (std::size_t r = 0; r < ds.size(); ++r) c.distinct.push_back(c.at(r));
      std::sort(c.distinct.begin(), c.distinct.end());
      c.distinct.erase(std::unique(c.distinct.begin(), c.distinct.end()), c.distinct.end());
      cols_.push_back(std::move(c));
    }
    good_.resize(ds.size());
    for (std::size_t r = 0; r < ds.size(); ++r) good_[r] = ds.labels[r] == target;
  }

  std::vector<ConjectureBox> run() {
    std::vector<ConjectureBox> out;
    for (std::size_t f = 0; f < cols_.size(); ++f) single_runs(f, out);
    if (cfg_.max_clauses > 1) {
      for (std::size_t seed = 0; seed < cols_.size(); ++seed) covering(seed, out);
    }
    return finish(std::move(out));
  }

  std::vector<ConjectureBox> pairs(std::size_t fa, std::size_t fb, std::size_t cuts) {
    const auto ca = cut_values(cols_[fa].distinct, cuts);
    const auto cb = cut_values(cols_[fb].distinct, cuts);
    const std::size_t na = 2 * ca.size() - 1, nb = 2 * cb.size() - 1;
    // 2-D prefix sums of (rows, good rows) over the bucket grid.
    std::vector<std::size_t> tot((na + 1) * (nb + 1), 0), gd((na + 1) * (nb + 1), 0);
    for (std::size_t r = 0; r < ds_.size(); ++r) {
      const std::size_t i = bucket(ca, cols_[fa].at(r)) + 1, j = bucket(cb, cols_[fb].at(r)) + 1;
      ++tot[i * (nb + 1) + j];
      gd[i * (nb + 1) + j] += good_[r];
    }
    for (std::size_t i = 1; i <= na; ++i)
      for (std::size_t j = 1; j <= nb; ++j) {
        const std::size_t k = i * (nb + 1) + j;
        tot[k] += tot[k - 1] + tot[k - nb - 1] - tot[k - nb - 2];
        gd[k] += gd[k - 1] + gd[k - nb - 1] - gd[k - nb - 2];
      }
    auto rect = [&](const std::vector<std::size_t>& p, std::size_t i0, std::size_t i1, std::size_t j0, std::size_t j1) {
      return p[(i1 + 1) * (nb + 1) + j1 + 1] + p[i0 * (nb + 1) + j0] - p[i0 * (nb + 1) + j1 + 1] -
             p[(i1 + 1) * (nb + 1) + j0];
    };
    std::vector<ConjectureBox> out;
    for (std::size_t a0 = 0; a0 < ca.size(); ++a0)
      for (std::size_t a1 = a0; a1 < ca.size(); ++a1)
        for (std::size_t b0 = 0; b0 < cb.size(); ++b0)
          for (std::size_t b1 = b0; b1 < cb.size(); ++b1) {
            const std::size_t t = rect(tot, 2 * a0, 2 * a1, 2 * b0, 2 * b1);
            if (t < cfg_.min_support || rect(gd, 2 * a0, 2 * a1, 2 * b0, 2 * b1) != t) continue;
            std::vector<std::pair<std::size_t, Clause>> box{{fa, {cols_[fa].name, ca[a0], ca[a1]}},
                                                            {fb, {cols_[fb].name, cb[b0], cb[b1]}}};
            out.push_back(relax(std::move(box)));
          }
    return finish(std::move(out));
  }

 private:
  using IndexedClauses = std::vector<std::pair<std::size_t, Clause>>;

  bool inside(std::size_t r, const IndexedClauses& box, std::size_t skip = SIZE_MAX) const {
    for (std::size_t i = 0; i < box.size(); ++i) {
      if (i == skip) continue;
      const double v = cols_[box[i].first].at(r);
      if (v < box[i].second.lo || v > box[i].second.hi) return false;
    }
    return true;
  }

  // Maximal runs of observed values with no off-target row.
  void single_runs(std::size_t f, std::vector<ConjectureBox>& out) const {
    const Column& c = cols_[f];
    std::vector<std::size_t> total(c.distinct.size(), 0), bad(c.distinct.size(), 0);
    for (std::size_t r = 0; r < ds_.size(); ++r) {
      const std::size_t k = c.rank(c.at(r));
      ++total[k];
      bad[k] += good_[r] ? 0 : 1;
    }
    for (std::size_t a = 0; a < c.distinct.size();) {
      if (bad[a]) {
        ++a;
        continue;
      }
      std::size_t b = a;
      std::size_t support = total[a];
      while (b + 1 < c.distinct.size() && !bad[b + 1]) support += total[++b];
      if (support >= cfg_.min_support) out.push_back({{{c.name, c.distinct[a], c.distinct[b]}}, support, support});
      a = b + 1;
    }
  }

  // Sequential covering from one seed feature.
  void covering(std::size_t seed, std::vector<ConjectureBox>& out) const {
    std::vector<char> covered(ds_.size(), 0);
    for (std::size_t k = 0; k < cfg_.max_boxes_per_seed; ++k) {
      IndexedClauses box;
      if (!greedy(seed, covered, box)) return;
      ConjectureBox b = relax(std::move(box));
      IndexedClauses kept;
      for (const Clause& c : b.clauses) {
        for (std::size_t f = 0; f < cols_.size(); ++f)
          if (cols_[f].name == c.feature) kept.push_back({f, c});
      }
      for (std::size_t r = 0; r < ds_.size(); ++r)
        if (inside(r, kept)) covered[r] = 1;
      if (b.support >= cfg_.min_support) out.push_back(std::move(b));
    }
  }

  // Adds clauses (seed first) maximizing precision, then uncovered support,
  // until the box holds no off-target row. Endpoints come from quantile cuts
  // of the rows still inside.
  bool greedy(std::size_t seed, const std::vector<char>& covered, IndexedClauses& box) const {
    std::vector<std::size_t> rows(ds_.size());
    for (std::size_t r = 0; r < rows.size(); ++r) rows[r] = r;
    double current = -1.0;
    std::vector<char> used(cols_.size(), 0);
    for (int step = 0; step < cfg_.max_clauses; ++step) {
      struct Best {
        bool found = false;
        double precision = -1;
        std::size_t good = 0;
        std::size_t feature = 0;
        double lo = 0, hi = 0;
      } best;
      for (std::size_t f = 0; f < cols_.size(); ++f) {
        if (used[f] || (step == 0 && f != seed)) continue;
        const Column& c = cols_[f];
        std::vector<double> vals;
        vals.reserve(rows.size());
        for (std::size_t r : rows) vals.push_back(c.at(r));
        std::sort(vals.begin(), vals.end());
        vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
        const std::vector<double> cuts = cut_values(std::move(vals), cfg_.max_cuts);
        const std::size_t nb = 2 * cuts.size() - 1;
        std::vector<std::size_t> gp(nb + 1, 0), bp(nb + 1, 0);
        for (std::size_t r : rows) {
          const std::size_t k = bucket(cuts, c.at(r)) + 1;
          if (!good_[r]) {
            ++bp[k];
          } else if (!covered[r]) {
            ++gp[k];
          }
        }
        for (std::size_t k = 1; k <= nb; ++k) {
          gp[k] += gp[k - 1];
          bp[k] += bp[k - 1];
        }
        for (std::size_t a = 0; a < cuts.size(); ++a)
          for (std::size_t b = a; b < cuts.size(); ++b) {
            const std::size_t g = gp[2 * b + 1] - gp[2 * a];
            const std::size_t bad = bp[2 * b + 1] - bp[2 * a];
            if (g < cfg_.min_support || g == 0) continue;
            const double prec = static_cast<double>(g) / static_cast<double>(g + bad);
            if (!best.found || prec > best.precision || (prec == best.precision && g > best.good)) {
              best = {true, prec, g, f, cuts[a], cuts[b]};
            }
          }
      }
      if (!best.found || best.precision <= current) return false;
      current = best.precision;
      used[best.feature] = 1;
      box.push_back({best.feature, {cols_[best.feature].name, best.lo, best.hi}});
      std::erase_if(rows, [&](std::size_t r) {
        const double v = cols_[best.feature].at(r);
        return v < best.lo || v > best.hi;
      });
      if (best.precision == 1.0) return true;
    }
    return false;
  }

  // Widens every endpoint over all observed values while the box stays pure,
  // then recounts. Clauses that end up spanning the whole observed range are
  // dropped (keeping at least one).
  ConjectureBox relax(IndexedClauses box) const {
    for (std::size_t i = 0; i < box.size(); ++i) {
      const Column& c = cols_[box[i].first];
      std::vector<std::size_t> bad(c.distinct.size(), 0);
      for (std::size_t r = 0; r < ds_.size(); ++r)
        if (!good_[r] && inside(r, box, i)) ++bad[c.rank(c.at(r))];
      std::size_t lo = c.rank(box[i].second.lo), hi = c.rank(box[i].second.hi);
      while (hi + 1 < c.distinct.size() && bad[hi + 1] == 0) ++hi;
      while (lo > 0 && bad[lo - 1] == 0) --lo;
      box[i].second.lo = c.distinct[lo];
      box[i].second.hi = c.distinct[hi];
    }
    std::sort(box.begin(), box.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    IndexedClauses kept;
    for (const auto& e : box) {
      const Column& c = cols_[e.first];
      if (e.second.lo != c.distinct.front() || e.second.hi != c.distinct.back()) kept.push_back(e);
    }
    if (kept.empty()) kept.push_back(box.front());
    ConjectureBox out;
    for (const auto& e : kept) out.clauses.push_back(e.second);
    for (std::size_t r = 0; r < ds_.size(); ++r) {
      if (!inside(r, kept)) continue;
      ++out.support;
      out.positives += good_[r];
    }
    return out;
  }

  static std::vector<ConjectureBox> finish(std::vector<ConjectureBox> boxes) {
    auto key = [](const ConjectureBox& b) {
      std::vector<std::tuple<std::string, double, double>> k;
      for (const Clause& c : b.clauses) k.emplace_back(c.feature, c.lo, c.hi);
      return k;
    };
    std::sort(boxes.begin(), boxes.end(), [&](const ConjectureBox& a, const ConjectureBox& b) {
      if (a.support != b.support) return a.support > b.support;
      if (a.clauses.size() != b.clauses.size()) return a.clauses.size() < b.clauses.size();
      return key(a) < key(b);
    });
    boxes.erase(std::unique(boxes.begin(), boxes.end()), boxes.end());
    return boxes;
  }

  const Dataset& ds_;
  MiningConfig cfg_;
  std::vector<Column> cols_;
  std::vector<char> good_;
};

}  // namespace

std::vector<ConjectureBox> mine_zero_fp_boxes(const Dataset& ds, const std::vector<std::string>& candidates,
                                              const MiningConfig& cfg) {
  return Miner(ds, candidates, cfg, 1).run();
}

std::vector<ConjectureBox> negative_condition_scan(const Dataset& ds, const std::vector<std::string>& candidates,
                                                   const MiningConfig& cfg) {
  return Miner(ds, candidates, cfg, 0).run();
}

std::vector<ConjectureBox> exhaustive_pair_boxes(const Dataset& ds, const std::string& a, const std::string& b,
                                                 std::size_t min_support, std::size_t cuts, int target) {
  MiningConfig cfg;
  cfg.min_support = min_support;
  return Miner(ds, {a, b}, cfg, target).pairs(0, 1, cuts);
}

std::string format_value(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string clause_text(const Clause& c) {
  if (c.lo == c.hi) return c.feature + " = " + format_value(c.lo);
  return format_value(c.lo) + " ≤ " + c.feature + " ≤ " + format_value(c.hi);
}

}  // namespace

std::string conjecture_report_text(const std::vector<ConjectureBox>& boxes, const ReportMeta& meta, bool negative) {
  const std::string conclusion = negative ? "not e-positive" : "e-positive";
  std::string out = "Candidate conditions for " + conclusion + " (connected graphs, n ≤ " + std::to_string(meta.n_max) +
                    ", " + std::to_string(meta.dataset_size) + " graphs)\n";
  if (boxes.empty()) return out + "No candidate condition found.\n";
  for (const ConjectureBox& b : boxes) {
    out += "∀ connected G on n≤" + std::to_string(meta.n_max) + " vertices: ";
    for (std::size_t i = 0; i < b.clauses.size(); ++i) out += (i ? " ∧ " : "") + clause_text(b.clauses[i]);
    out += " ⇒ " + conclusion + " (support " + std::to_string(b.support) + ", verified exhaustively)\n";
  }
  return out;
}

nlohmann::json conjecture_report_json(const std::vector<ConjectureBox>& boxes, const ReportMeta& meta, bool negative) {
  nlohmann::json arr = nlohmann::json::array();
  for (const ConjectureBox& b : boxes) {
    nlohmann::json clauses = nlohmann::json::array();
    for (const Clause& c : b.clauses) clauses.push_back({{"feature", c.feature}, {"lo", c.lo}, {"hi", c.hi}});
    arr.push_back({{"clauses", std::move(clauses)},
                   {"support", b.support},
                   {"n_max", meta.n_max},
                   {"verified", b.positives == b.support}});
  }
  return {{"conclusion", negative ? "not e-positive" : "e-positive"},
          {"n_max", meta.n_max},
          {"dataset_size", meta.dataset_size},
          {"boxes", std::move(arr)}};
}

}  // namespace epos

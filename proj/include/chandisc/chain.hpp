// All five norms of one channel pair, with a consistency check across the
// chain NE <= LOCC <= SEP <= PPT <= DIAMOND.
#pragma once

#include "chandisc/locc.hpp"
#include "chandisc/norms.hpp"

#include <array>
#include <chrono>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace chandisc {

struct ChainOptions {
  SeesawOptions seesaw;
  int ppt_restarts = 4;
  int ppt_max_dim = 64;  // PPT seesaw is skipped above this joint dimension
  double tolerance = 1e-6;
};

struct ChainBounds {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = 2.0;
  std::string lower_source;
  std::string upper_source = "trivial";
};

struct ChainReport {
  std::vector<NormEstimate> rows;    // NE, LOCC, SEP, PPT, DIAMOND
  std::array<ChainBounds, 5> own;    // bounds established for each norm directly
  std::array<ChainBounds, 5> shown;  // lower bounds carried up the chain
  double worst_gap = -std::numeric_limits<double>::infinity();  // max over i <= j of lower_i - upper_j
};

inline std::size_t norm_index(NormKind k) { return static_cast<std::size_t>(k); }

/// Throws chain_violation when a lower bound of a smaller norm exceeds an
/// upper bound of a larger one by more than `tol`. Returns the worst gap.
inline double check_chain(const std::array<ChainBounds, 5>& b, double tol) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = i; j < b.size(); ++j) {
      const double gap = b[i].lower - b[j].upper;
      worst = std::max(worst, gap);
      if (gap > tol) {
        throw Error("chain_violation", std::string(norm_name(kAllNorms[i])) + " lower bound " +
                                           std::to_string(b[i].lower) + " exceeds " + norm_name(kAllNorms[j]) +
                                           " upper bound " + std::to_string(b[j].upper));
      }
    }
  return worst;
}

inline ChainReport norm_chain(const ChannelPair& pair, const ChainOptions& opt = {}) {
  using clock = std::chrono::steady_clock;
  auto seconds_since = [](clock::time_point t0) {
    return std::chrono::duration<double>(clock::now() - t0).count();
  };
  const std::vector<AnalyticEntry> reg = analytic_registry(pair);
  ChainReport rep;
  auto& own = rep.own;
  auto set_upper = [&](NormKind k, double v, const std::string& src) {
    ChainBounds& b = own[norm_index(k)];
    if (v < b.upper) {
      b.upper = v;
      b.upper_source = src;
    }
  };
  auto set_lower = [&](NormKind k, double v, const std::string& src) {
    ChainBounds& b = own[norm_index(k)];
    if (v > b.lower) {
      b.lower = v;
      b.lower_source = src;
    }
  };
  for (const AnalyticEntry& e : reg) set_upper(e.norm, e.value, e.source);

  // NE
  auto t0 = clock::now();
  NormEstimate ne = ne_norm(pair, opt.seesaw);
  ne.seconds = seconds_since(t0);
  set_lower(NormKind::NE, ne.value, ne.method);

  // LOCC
  t0 = clock::now();
  NormEstimate locc;
  locc.norm = NormKind::LOCC;
  locc.value = ne.value;
  locc.method = "ne";
  std::optional<ProtocolSetup> setup;
  try {
    setup = family_protocol(pair);
  } catch (const Error& e) {
    if (e.code() != "not_perfectly_discriminable") throw;
  }
  if (setup) {
    const NormEstimate p = locc_lower_bound(setup->protocol, pair, projector(setup->input));
    set_lower(NormKind::LOCC, p.value, "protocol");
    if (p.value >= locc.value) {
      locc.value = p.value;
      locc.method = "protocol";
      locc.iterations = p.iterations;
    }
  }
  locc.seconds = seconds_since(t0);

  // SEP: NE is attained by a product measurement, and LOCC measurements are separable.
  t0 = clock::now();
  set_lower(NormKind::SEP, ne.value, "product measurement");
  std::optional<NormEstimate> ne_upper;
  if (ne.direction != Direction::lower) {
    ne_upper = ne;
  } else if (const auto e = registry_entry(reg, NormKind::NE)) {
    NormEstimate u;
    u.value = e->value;
    u.direction = e->direction;
    ne_upper = u;
  }
  if (ne_upper) set_upper(NormKind::SEP, sep_upper_bound_thm1(pair, *ne_upper).value, "product-measurement bound");
  NormEstimate sep;
  sep.norm = NormKind::SEP;
  sep.value = std::max(ne.value, locc.value);
  sep.method = locc.value > ne.value ? "protocol" : "product measurement";
  sep.seconds = seconds_since(t0);

  // PPT
  t0 = clock::now();
  NormEstimate ppt;
  ppt.norm = NormKind::PPT;
  const int joint = pair.phi0.dim_out * pair.phi0.dim_in;
  if (joint <= opt.ppt_max_dim) {
    SeesawOptions o = opt.seesaw;
    o.restarts = std::max(1, std::min(o.restarts, opt.ppt_restarts));
    ppt = ppt_norm(pair, o);
    set_lower(NormKind::PPT, ppt.value, ppt.method);
  } else {
    ppt.value = -std::numeric_limits<double>::infinity();
    ppt.method = "skipped";
  }
  if (ppt.value < sep.value) {
    ppt.value = sep.value;
    ppt.method = "inherited";
    ppt.direction = Direction::lower;
  }
  ppt.seconds = seconds_since(t0);

  // Diamond
  t0 = clock::now();
  NormEstimate dia = diamond_norm(pair, opt.seesaw);
  dia.seconds = seconds_since(t0);
  set_lower(NormKind::DIAMOND, dia.value, dia.method);

  rep.worst_gap = check_chain(own, opt.tolerance);

  rep.shown = own;
  for (std::size_t j = 1; j < rep.shown.size(); ++j) {
    if (rep.shown[j - 1].lower > rep.shown[j].lower) {
      rep.shown[j].lower = rep.shown[j - 1].lower;
      rep.shown[j].lower_source = rep.shown[j - 1].lower_source;
    }
  }

  rep.rows = {ne, locc, sep, ppt, dia};
  for (NormEstimate& r : rep.rows) {
    const ChainBounds& b = rep.shown[norm_index(r.norm)];
    r.value = std::max(r.value, b.lower);
    if (r.direction != Direction::exact && b.upper - r.value <= exact_match_tolerance(r.norm) &&
        r.norm != NormKind::LOCC) {
      r.direction = Direction::exact;
      r.residual = std::abs(b.upper - r.value);
    }
  }
  return rep;
}

}  // namespace chandisc

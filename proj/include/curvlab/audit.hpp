#pragma once

#include <json.hpp>

#include "curvlab/auxiliary.hpp"

namespace curvlab {

using Json = nlohmann::ordered_json;

struct AuditOptions {
  int n_s = 96;
  int n_t = 192;
  std::uint64_t seed = 42;
  int z_samples = 10;
};

enum class Verdict { Pass, Fail, NotApplicable };

const char* verdict_name(Verdict v);

struct ZSampleResult {
  ChartPoint point;
  double value_at_base = 0.0;
  double pde_residual = 0.0;
  double identity_orthogonality = 0.0;
  double identity_norm_rel = 0.0;
  int boundary_zero_count = 0;
  int tangency_count = 0;
};

/// Everything cmd_audit reports, in structured form plus the JSON document.
struct AuditResult {
  Verdict verdict = Verdict::Fail;
  HypothesesReport hypotheses;
  bool semi_stable = false;
  double lambda_min = 0.0;
  double lambda = 0.0;  // eigen nonlinearity only
  std::vector<CriticalPointRecord> u_records, p_records;
  PoincareHopfReport ph;
  BoundaryIdentityReport boundary_identity;
  CoincidenceReport coincidence;
  NondegeneracyReport nondegeneracy;
  std::vector<ZSampleResult> z_samples;
  double p_consistency = 0.0;
  Json report;
};

/// Full verification pipeline on one domain and nonlinearity: hypotheses,
/// solve, stability, critical points of u and P, Poincare-Hopf accounting,
/// boundary identity, coincidence and non-degeneracy audits, Z sampling.
AuditResult audit_domain(const DomainSpec& d, const Nonlinearity& nl, const AuditOptions& opt);

/// Deterministic uniform numbers from a seeded generator (the standard
/// distributions are not bit-portable, this is).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  double uniform(double a, double b) {
    return a + (b - a) * (static_cast<double>(next() >> 11) * 0x1.0p-53);
  }

 private:
  std::uint64_t next() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  std::uint64_t state_;
};

}  // namespace curvlab

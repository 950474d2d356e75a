#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qfcert/certificate.hpp"
#include "qfcert/quadform.hpp"
#include "qfcert/verdict.hpp"

namespace qfcert {

// A complete discretely valued field, described by its uniformizer and its
// residue field: either another such field (an iterated Laurent tower), a
// quadratically closed base, an opaque field known only to satisfy the C_i
// bound, or a concrete finite field (oracle mode only).
struct CompleteFieldModel {
  enum class Kind { QuadraticallyClosedBase, CiBound, Tower, FiniteField };

  Kind kind = Kind::QuadraticallyClosedBase;
  std::string uniformizer;  // Tower only
  int ci_index = 0;         // CiBound only
  long long prime = 0;      // FiniteField only: an odd prime
  std::shared_ptr<const CompleteFieldModel> residue;  // Tower only

  static CompleteFieldModel quadratically_closed();
  static CompleteFieldModel ci_bound(int i);
  static CompleteFieldModel finite_field(long long q);
  static CompleteFieldModel laurent(const std::string& uniformizer, CompleteFieldModel residue_model);
  // Iterated tower k((v1))((v2))...((vn)): vars listed innermost-first, so the
  // model's own uniformizer is vars.back().
  static CompleteFieldModel laurent_tower(const std::vector<std::string>& vars,
                                          CompleteFieldModel base);

  // Laurent variables from the outermost level inward.
  std::vector<std::string> tower_variables() const;
  // True when no level of the chain has a finite residue field; then -1 is a
  // square at every level and a repeated diagonal entry gives a hyperbolic pair.
  bool finite_field_free() const;
  int depth() const;
  std::string str() const;

  nlohmann::json to_json() const;
  static CompleteFieldModel from_json(const nlohmann::json& j);
};

// One diagonal entry u * prod(v in odd_vars) v over a tower: the exponent
// vector mod 2 plus a unit part (meaningful only over finite residue fields,
// where it is a nonzero residue representative).
struct MonomialEntry {
  std::set<std::string> odd_vars;
  long long unit = 1;

  bool operator==(const MonomialEntry& o) const { return odd_vars == o.odd_vars && unit == o.unit; }
  bool operator<(const MonomialEntry& o) const {
    return odd_vars != o.odd_vars ? odd_vars < o.odd_vars : unit < o.unit;
  }
  std::string str() const;
};

struct MonomialForm {
  std::vector<MonomialEntry> entries;

  std::size_t dim() const { return entries.size(); }
  std::string str() const;
  nlohmann::json to_json() const;
  static MonomialForm from_json(const nlohmann::json& j);
};

// First/second residue forms at the uniformizer: q = q1 + uniformizer * q2
// with q1 the entries of even valuation and q2 those of odd valuation, the
// uniformizer divided out.  dim q1 + dim q2 = dim q.
std::pair<MonomialForm, MonomialForm> springer_split(const MonomialForm& q,
                                                     const std::string& uniformizer);

// Maps a diagonal form over a field instance into a monomial form over the
// tower in the instance's variables: variable generators contribute exponent
// bits; declared factors are units with nonzero constant residue, hence
// squares by the Hensel rule, and drop out.
MonomialForm to_monomial_form(const DiagonalForm& q, const CompleteFieldModel& model);

struct IsotropyDecision {
  Verdict verdict = Verdict::NotDecided;
  CertStep trace;
};

// Recursive isotropy decision over the model: towers split and recurse (the
// form is isotropic iff a residue form is); the bases decide as documented
// in the trace.  "Not decided by bound" is a value, not an error.
IsotropyDecision is_isotropic_complete(const MonomialForm& q, const CompleteFieldModel& model);

// Builds the 2^n-entry multiplicative form in the instance's coordinate
// variables (the slots must be exactly those variables), maps it onto the
// iterated Laurent tower, and decides anisotropy there.  The certificate
// carries an explicit caveat: this does not certify nontriviality of the
// symbol over the function field of the double cover.
Certificate certify_pfister_anisotropic_via_laurent(const FieldInstancePtr& instance,
                                                    const std::vector<SquareClass>& slots);

// ---- finite-field oracle --------------------------------------------------

// A diagonal form over F_q((t)) with entries u * t^e, u a unit representative.
struct OracleForm {
  long long q = 3;  // odd prime
  std::vector<std::pair<long long, long long>> entries;  // (exponent e, unit u)

  std::string str() const;
};

// One coordinate of a witness: a Laurent polynomial as (exponent, coeff) terms.
using OracleCoordinate = std::vector<std::pair<long long, long long>>;

struct OracleResult {
  bool found = false;
  std::vector<OracleCoordinate> witness;  // empty when not found
  std::string summary;
};

bool is_square_mod(long long a, long long q);
long long least_nonsquare_mod(long long q);

// Evaluates the form at the witness; true iff the value is identically zero
// and the witness is not the zero vector.
bool oracle_witness_checks(const OracleForm& form, const std::vector<OracleCoordinate>& w);

// Searches for a nontrivial zero with coordinate exponents in
// [-degree_bound, degree_bound].  height_bound 1 is an exhaustive,
// deterministic search over single-term coordinates (the witness returned is
// the least in the documented coordinate order); height_bound >= 2 adds
// seeded randomized multi-term trials on top.  Bounds must be positive.
OracleResult brute_force_isotropic(const OracleForm& form, int degree_bound, int height_bound,
                                   std::uint64_t seed = 0);

// Springer-side verdict for the same form, via the exact finite-field base.
Verdict springer_verdict_laurent_fq(const OracleForm& form);

struct AgreementReport {
  int total = 0;
  int isotropic = 0;
  int anisotropic = 0;
  int mismatches = 0;
  int unverified_witnesses = 0;
  std::vector<std::string> failures;
  bool ok() const { return mismatches == 0 && unverified_witnesses == 0 && total > 0; }
  std::string summary() const;
};

// Enumerates all diagonal forms (as multisets) with entries t^e * u for
// e in {0,1} and u in the given unit alphabet, dims 1..max_dim, over each q,
// and checks the Springer verdict against the brute-force search.
AgreementReport oracle_agreement_sweep(const std::vector<long long>& qs, int max_dim,
                                       int degree_bound, bool full_unit_alphabet);

}  // namespace qfcert

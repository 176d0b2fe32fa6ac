#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>

namespace declab {

enum class SeqKind { Log, ApRich, Random, Custom };

const char* kind_name(SeqKind k);

struct GenDirichletSeq {
  Eigen::VectorXd terms;
  long N = 0;
  double theta = 1.0;
  SeqKind kind = SeqKind::Custom;
  std::uint64_t seed = 0;

  Eigen::Index size() const { return terms.size(); }
  double operator[](Eigen::Index i) const { return terms[i]; }
};

struct ValidationReport {
  bool valid = false;
  double first_gap = 0.0;
  double min_second = 0.0;
  double max_second = 0.0;
  std::optional<Eigen::Index> violating;  // index i of the first bad difference
  std::string reason;
};

// Checks a_2 - a_1 in [1/(4N), 4/N] and every second difference in
// [theta/(4N^2), 4 theta/N^2]. Throws std::invalid_argument for fewer than 3 terms.
ValidationReport validate(const Eigen::Ref<const Eigen::VectorXd>& a, long N, double theta);
inline ValidationReport validate(const GenDirichletSeq& s) { return validate(s.terms, s.N, s.theta); }

long short_length(long N);

// log(N+n) - log(N+1), n = 1..floor(sqrt N), as written (concave).
Eigen::VectorXd log_terms(long N);

// Convex reflection of the log block: a_n = log(N+M) - log(N+M+1-n).
GenDirichletSeq gen_log(long N);

double ap_rich_value(long N, double x);

// terms[n] = g(n) for n = 0..floor(N/8); g is kept while admissible and then
// continued with its last second difference.
GenDirichletSeq gen_ap_rich(long N, long N0 = 64);
// Largest n for which g(0..n) is admissible with theta = 1.
long ap_rich_admissible_end(long N);

GenDirichletSeq gen_random(long N, double theta, std::uint64_t seed, long M = -1);

GenDirichletSeq rescale_segment(const GenDirichletSeq& s, long K, Eigen::Index start, Eigen::Index count);

// Affine copy with a_1 = 0 and a_2 - a_1 = 1/N.
GenDirichletSeq normalize_unit_gap(const GenDirichletSeq& s);

// Continue the sequence to length M with constant last second difference.
Eigen::VectorXd extend_constant_d2(const Eigen::Ref<const Eigen::VectorXd>& a, Eigen::Index M);

std::string to_json(const GenDirichletSeq& s);

}  // namespace declab

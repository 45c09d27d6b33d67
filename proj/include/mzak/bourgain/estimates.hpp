#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "mzak/bourgain/spacetime.hpp"

namespace mzak {

/// Bilinear estimates. C and D families live in three dimensions, E and F in two.
enum class LemmaId {
  C,
  C_prime,
  C_double_prime,
  D,
  D_prime,
  D_double_prime,
  E,
  E_prime,
  E_double_prime,
  F,
  F_tilde,
  F_prime,
  F_double_prime,
};

/// "C", "C'", "C''", ..., "F~"; parsing also takes "Cp"/"Cpp" and "Ft".
std::string to_string(LemmaId id);
LemmaId lemma_from_string(std::string_view name);
int lemma_dimension(LemmaId id);
/// True for the C and E families, whose second argument is a wave field.
bool lemma_pairs_with_wave(LemmaId id);

struct LemmaParams {
  double k = 1.0;
  double l = -1.0;
  double epsilon = 0.25;  // E and F families only
  double delta = 0.25;    // E and F families only
  double plus = 0.01;     // the small shift in exponents written b+ or b-
  int sign = 1;           // wave dispersion: +1 uses tau + |xi|, -1 uses tau - |xi|
  int derivative_axis = 0;

  friend bool operator==(const LemmaParams&, const LemmaParams&) = default;
};

/// Throws InadmissibleParameters naming the first violated hypothesis.
void check_admissible(LemmaId id, const LemmaParams& p);
bool is_admissible(LemmaId id, const LemmaParams& p);
/// Every lemma of the given dimension whose hypotheses hold at p.
std::vector<LemmaId> admissible_lemmas(int dimension, const LemmaParams& p);

struct RatioTerms {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

/// LHS norm of the lemma's bilinear expression and the product of RHS norms, with
/// D = partial along params.derivative_axis and B = |xi| (B^s set to 0 at xi = 0).
///   C, C', C'':  B^{-1}(D phi D chi) in X^{k,-1/2+}, X^{k,-1/2}, Y^k
///                vs ||D phi||_{X^{k,1/2}} ||D chi||_{X+-^{l,1/2}}
///   D:           D conj(phi1) D phi2 in X+-^{l+2,-1/2+} vs ||D phi_i||_{X^{k,1/2}}
///   D', D'':     same product in X+-^{l+2,-1/2}, Y+-^{l+2} vs ||D phi_i||_{X^{k,1/2+}}
///   E, E', E'':  B^{-1+eps}(D phi D chi) in X^{k-eps,-1/2+}, X^{k-eps,-1/2}, Y^{k-eps}
///                vs ||B^eps D phi||_{X^{k-eps,1/2}} ||B^{-delta} D chi||_{X+-^{l+delta,1/2}}
///   F, F', F'':  B^{2-delta}(D conj(phi) D phi) in X+-^{l+delta,-1/2+}, X+-^{l+delta,-1/2},
///                Y+-^{l+delta} vs ||B^eps D phi||^2_{X^{k-eps,1/2}}
///   F~:          D conj(phi) D phi in the dotted X+-^{l+2,-1/2+} (mean removed), same RHS
/// `second` is chi for C/E, phi2 for D and unused for F. RHS = 0 gives ratio 0.
RatioTerms bilinear_terms(const SpaceTimeField& phi, const SpaceTimeField& second, LemmaId id,
                          const LemmaParams& params);
double bilinear_ratio(const SpaceTimeField& phi, const SpaceTimeField& second, LemmaId id,
                      const LemmaParams& params);

/// Lattice and sampling of a random windowed ensemble. Members are free solutions
/// with complex Gaussian coefficients on 0 < max|m_j| <= band, modulated by e^{i nu t}
/// with |nu| <= 1 and multiplied by the window bump(t / T). Time step is 5 T / n_time.
/// Member j draws from splitmix64(seed + j), so a refined lattice carries the same
/// continuous fields.
struct EnsembleSpec {
  int dimension = 2;
  int points = 8;
  int n_time = 32;
  double period = 6.283185307179586;
  int band = 2;
  std::size_t members = 100;
  std::uint64_t seed = 1;

  EnsembleSpec refined() const;

  friend bool operator==(const EnsembleSpec&, const EnsembleSpec&) = default;
};

double ensemble_dt(const EnsembleSpec& spec, double T);

struct EnsembleMember {
  SpaceTimeField phi;
  SpaceTimeField second;
};

/// second follows the dispersion the lemma pairs with phi.
EnsembleMember ensemble_member(const EnsembleSpec& spec, std::size_t j, double T,
                               Dispersion second_dispersion);

struct EstimateReport {
  LemmaId lemma = LemmaId::C;
  LemmaParams params;
  std::size_t sample_count = 0;
  std::vector<double> T;       // per sample
  std::vector<double> ratios;  // per sample
  double max_ratio = 0.0;
  double mean_ratio = 0.0;
  double theta_fit = 0.0;  // NaN with a single T value

  void add(double T_value, double ratio);
};

/// Ratios of every ensemble member at one T.
EstimateReport ensemble_ratios(LemmaId id, const LemmaParams& params, const EnsembleSpec& spec,
                               double T);

/// Least-squares slope of log(max ratio) against log T. Needs >= 3 values, all positive.
double fit_theta(const std::vector<double>& T, const std::vector<double>& max_ratio);

/// Runs ensemble_ratios for each T (increasing, within (0, 1]) and fits theta.
EstimateReport theta_scan(LemmaId id, const LemmaParams& params, const std::vector<double>& T_list,
                          const EnsembleSpec& spec);

/// CSV `sample_id,T,ratio` followed by a `# summary` line.
void write_estimate_csv(std::ostream& out, const EstimateReport& report);
std::string summary_line(const EstimateReport& report);

}  // namespace mzak

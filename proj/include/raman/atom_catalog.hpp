#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "raman/dipole_geometry.hpp"
#include "raman/effective_dynamics.hpp"

namespace raman {

enum class LineLabel { D1, D2 };

std::string to_string(LineLabel label);
/// "D1"/"D2", case-insensitive; throws std::invalid_argument otherwise.
LineLabel parse_line_label(std::string_view text);

struct AtomLine {
  LineLabel label = LineLabel::D2;
  HalfInt Jprime;
  double wavelength = 0.0;  // m
  double linewidth = 0.0;   // rad/s
};

struct AtomSpec {
  std::string name;
  HalfInt I;
  std::vector<AtomLine> lines;
  double ground_splitting = 0.0;  // rad/s

  /// D1 needs J'=1/2, D2 needs J'=3/2; positive physical values; I >= 1/2.
  void validate() const;
  const AtomLine &line(LineLabel label) const;
  HalfInt F_lower() const { return branch_F(I, Branch::pump); }
  HalfInt F_upper() const { return branch_F(I, Branch::stokes); }
};

class AtomDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses the atom data format (see data/atoms.dat).
std::vector<AtomSpec> parse_atom_data(std::istream &in);
std::vector<AtomSpec> load_atom_data(const std::string &path);

/// Catalogue compiled in from data/atoms.dat.
const std::vector<AtomSpec> &builtin_atoms();
/// Case-insensitive lookup; throws std::invalid_argument listing known names.
const AtomSpec &find_atom(const std::vector<AtomSpec> &atoms, std::string_view name);

struct FieldSpec {
  Complex amplitude;  // V/m
  Polarization polarization;
};

/// Lower state in F = I-1/2, upper state in F = I+1/2 with
/// mF_upper = mF_lower + qP - qS.
struct RamanPair {
  AngularMomentumState lower;
  AngularMomentumState upper;
  Polarization qP;
  Polarization qS;
};

std::vector<RamanPair> enumerate_pairs(const AtomSpec &atom, Polarization qP, Polarization qS);

/// Omega = E <J||mu||J'> G / hbar per excited F', rad/s.
CouplingVectors physical_couplings(const AtomSpec &atom, LineLabel line, const RamanPair &pair,
                                   const FieldSpec &pump, const FieldSpec &stokes);

struct SpectrumRow {
  RamanPair pair;
  CouplingVectors couplings;
  double OmegaB = 0.0;
  double DeltaB = 0.0;
  double envelope = 0.0;  // at the configured two-photon detuning
};

std::vector<SpectrumRow> spectrum(const AtomSpec &atom, LineLabel line, const FieldSpec &pump,
                                  const FieldSpec &stokes, const DetuningSet &d);

/// Entry a or sqrt(a) written over a fixed denominator, e.g. "5/24", "sqrt(7)/24".
struct ExactEntry {
  Rational value;  // the square for root entries
  bool root = false;
  double decimal = 0.0;
  std::string text(long denominator) const;
};

struct TableRow {
  HalfInt mF;  // lower (F = I-1/2) state
  ExactEntry gdot;
  ExactEntry gs_norm_sq;
  ExactEntry gp_norm_sq;
};

struct GeometryTable {
  long denominator = 1;  // 3(2I+1)
  std::vector<TableRow> rows;
};

/// |G_P.G_S|, ||G_S||^2, ||G_P||^2 per Raman pair. Exact values come from the
/// closed forms and rational sums of Wigner products; decimals from the
/// numerical coupling vectors. Throws std::invalid_argument for polarization
/// pairs without a closed form, naming the supported ones.
GeometryTable geometry_table(const AtomSpec &atom, LineLabel line, Polarization qP,
                             Polarization qS);
/// Cs-style (1,1) table on the D2 line.
GeometryTable standard_table(const AtomSpec &atom);

struct CouplingCurvePoint {
  HalfInt I;
  HalfInt mF;
  double gdot_11 = 0.0;
  double gdot_01 = 0.0;
};

/// |G_P.G_S| against mF for (1,1) and (0,1) on a D2 line, one curve per I.
std::vector<CouplingCurvePoint> coupling_curves(const std::vector<HalfInt> &spins);

}  // namespace raman

#include "raman/atom_catalog.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <boost/property_tree/info_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "raman/constants.hpp"

namespace raman {

extern const char *const kBuiltinAtomData;

namespace {

namespace pt = boost::property_tree;

const HalfInt kJ = HalfInt::half(1);

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

template <class T>
T required(const pt::ptree &node, const std::string &key, const std::string &where) {
  auto v = node.get_optional<T>(key);
  if (!v) throw AtomDataError(where + ": missing or malformed key '" + key + "'");
  return *v;
}

AtomSpec parse_atom(const pt::ptree &node, std::size_t index) {
  std::string where = "atom #" + std::to_string(index + 1);
  AtomSpec atom;
  atom.name = required<std::string>(node, "name", where);
  where += " (" + atom.name + ")";
  atom.I = HalfInt::from_twice(required<int>(node, "nuclear_spin_x2", where));
  atom.ground_splitting = required<double>(node, "ground_splitting_rad_s", where);
  for (const auto &[key, child] : node) {
    if (key != "line") continue;
    AtomLine line;
    try {
      line.label = parse_line_label(required<std::string>(child, "label", where));
    } catch (const std::invalid_argument &e) {
      throw AtomDataError(where + ": " + e.what());
    }
    line.Jprime = HalfInt::from_twice(required<int>(child, "jprime_x2", where));
    line.wavelength = required<double>(child, "wavelength_m", where);
    line.linewidth = required<double>(child, "linewidth_rad_s", where);
    atom.lines.push_back(line);
  }
  try {
    atom.validate();
  } catch (const std::invalid_argument &e) {
    throw AtomDataError(where + ": " + e.what());
  }
  return atom;
}

Rational exact_norm_sq(const AngularMomentumState &ground, Polarization q, HalfInt Jprime) {
  Rational sum = 0;
  const HalfInt mFp = ground.mF + q.q();
  for (HalfInt Fp = abs(Jprime - ground.I); Fp <= Jprime + ground.I; Fp = Fp + 1) {
    if (abs(mFp) > Fp) continue;
    sum += geometric_factor_exact(ground, {ground.I, Jprime, Fp, mFp}, q).square;
  }
  return sum;
}

bool is_integer(const Rational &r) { return denominator(r) == 1; }

std::string rational_text(const Rational &r) {
  std::ostringstream s;
  s << numerator(r);
  if (denominator(r) != 1) s << '/' << denominator(r);
  return s.str();
}

}  // namespace

std::string to_string(LineLabel label) { return label == LineLabel::D1 ? "D1" : "D2"; }

LineLabel parse_line_label(std::string_view text) {
  const auto t = lower(text);
  if (t == "d1") return LineLabel::D1;
  if (t == "d2") return LineLabel::D2;
  throw std::invalid_argument("unknown line '" + std::string(text) + "' (expected D1 or D2)");
}

void AtomSpec::validate() const {
  if (name.empty()) throw std::invalid_argument("atom name is empty");
  if (I.twice() < 1) throw std::invalid_argument("nuclear spin must be at least 1/2");
  if (!(ground_splitting > 0.0)) throw std::invalid_argument("ground splitting must be positive");
  if (lines.empty()) throw std::invalid_argument("atom has no optical lines");
  for (const auto &l : lines) {
    const int expected = l.label == LineLabel::D1 ? 1 : 3;
    if (l.Jprime.twice() != expected)
      throw std::invalid_argument(to_string(l.label) + " requires J'=" + std::to_string(expected) +
                                  "/2");
    if (!(l.wavelength > 0.0) || !(l.linewidth > 0.0))
      throw std::invalid_argument(to_string(l.label) + " wavelength and linewidth must be positive");
  }
}

const AtomLine &AtomSpec::line(LineLabel label) const {
  for (const auto &l : lines)
    if (l.label == label) return l;
  throw std::invalid_argument(name + " has no " + to_string(label) + " line");
}

std::vector<AtomSpec> parse_atom_data(std::istream &in) {
  pt::ptree tree;
  try {
    pt::read_info(in, tree);
  } catch (const pt::info_parser_error &e) {
    throw AtomDataError(std::string("atom data: ") + e.what());
  }
  if (auto v = tree.get_optional<int>("version"); v && *v != 1)
    throw AtomDataError("atom data: unsupported format version " + std::to_string(*v));

  std::vector<AtomSpec> atoms;
  for (const auto &[key, node] : tree) {
    if (key == "version") continue;
    if (key != "atom") throw AtomDataError("atom data: unexpected top-level key '" + key + "'");
    atoms.push_back(parse_atom(node, atoms.size()));
  }
  for (std::size_t i = 0; i < atoms.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (lower(atoms[i].name) == lower(atoms[j].name))
        throw AtomDataError("atom data: duplicate atom '" + atoms[i].name + "'");
  return atoms;
}

std::vector<AtomSpec> load_atom_data(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw AtomDataError("cannot open atom data file " + path);
  return parse_atom_data(in);
}

const std::vector<AtomSpec> &builtin_atoms() {
  static const std::vector<AtomSpec> atoms = [] {
    std::istringstream in(kBuiltinAtomData);
    return parse_atom_data(in);
  }();
  return atoms;
}

const AtomSpec &find_atom(const std::vector<AtomSpec> &atoms, std::string_view name) {
  for (const auto &a : atoms)
    if (lower(a.name) == lower(name)) return a;
  std::string known;
  for (const auto &a : atoms) known += (known.empty() ? "" : ", ") + a.name;
  throw std::invalid_argument("unknown atom '" + std::string(name) + "' (known: " + known + ")");
}

std::vector<RamanPair> enumerate_pairs(const AtomSpec &atom, Polarization qP, Polarization qS) {
  const HalfInt Fl = atom.F_lower(), Fu = atom.F_upper();
  std::vector<RamanPair> pairs;
  for (HalfInt m = -Fl; m <= Fl; m = m + 1) {
    const HalfInt mu = m + (qP.q() - qS.q());
    if (abs(mu) > Fu) continue;
    pairs.push_back({{atom.I, kJ, Fl, m}, {atom.I, kJ, Fu, mu}, qP, qS});
  }
  return pairs;
}

CouplingVectors physical_couplings(const AtomSpec &atom, LineLabel line, const RamanPair &pair,
                                   const FieldSpec &pump, const FieldSpec &stokes) {
  if (!(pump.polarization == pair.qP) || !(stokes.polarization == pair.qS))
    throw std::invalid_argument("field polarizations do not match the Raman pair");
  const AtomLine &l = atom.line(line);
  const double mu = reduced_dipole_from_linewidth(l.linewidth, l.wavelength, kJ, l.Jprime).value;
  const Eigen::VectorXd gp = coupling_vector(pair.lower, pair.qP, l.Jprime).values();
  const Eigen::VectorXd gs = coupling_vector(pair.upper, pair.qS, l.Jprime).values();
  CouplingVectors c;
  c.pump = (pump.amplitude * mu / constants::hbar) * gp.cast<Complex>();
  c.stokes = (stokes.amplitude * mu / constants::hbar) * gs.cast<Complex>();
  return c;
}

std::vector<SpectrumRow> spectrum(const AtomSpec &atom, LineLabel line, const FieldSpec &pump,
                                  const FieldSpec &stokes, const DetuningSet &d) {
  std::vector<SpectrumRow> rows;
  for (const auto &pair : enumerate_pairs(atom, pump.polarization, stokes.polarization)) {
    SpectrumRow row{pair, physical_couplings(atom, line, pair, pump, stokes)};
    row.OmegaB = effective_rabi(row.couplings, d);
    row.DeltaB = lightshift(row.couplings, d);
    row.envelope = envelope(row.OmegaB, row.DeltaB - d.delta);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string ExactEntry::text(long denominator) const {
  const Rational scaled = Rational(value * (root ? denominator * denominator : denominator));
  if (is_integer(scaled)) {
    const std::string top = rational_text(scaled);
    return (root ? "sqrt(" + top + ")" : top) + "/" + std::to_string(denominator);
  }
  return root ? "sqrt(" + rational_text(value) + ")" : rational_text(value);
}

GeometryTable geometry_table(const AtomSpec &atom, LineLabel line, Polarization qP,
                             Polarization qS) {
  const HalfInt Jp = atom.line(line).Jprime;
  GeometryTable table;
  table.denominator = 3L * (atom.I.twice() + 1);
  for (const auto &pair : enumerate_pairs(atom, qP, qS)) {
    TableRow row;
    row.mF = pair.lower.mF;
    const Eigen::VectorXd gp = coupling_vector(pair.lower, qP, Jp).values();
    const Eigen::VectorXd gs = coupling_vector(pair.upper, qS, Jp).values();

    row.gdot.value = g_dot_closed_sq_exact(atom.I, pair.lower.mF, qP, qS, Jp);
    row.gdot.root = true;
    row.gdot.decimal = std::abs(gp.dot(gs));
    row.gs_norm_sq.value = exact_norm_sq(pair.upper, qS, Jp);
    row.gs_norm_sq.decimal = gs.squaredNorm();
    row.gp_norm_sq.value = exact_norm_sq(pair.lower, qP, Jp);
    row.gp_norm_sq.decimal = gp.squaredNorm();
    table.rows.push_back(std::move(row));
  }
  return table;
}

GeometryTable standard_table(const AtomSpec &atom) {
  return geometry_table(atom, LineLabel::D2, Polarization(1), Polarization(1));
}

std::vector<CouplingCurvePoint> coupling_curves(const std::vector<HalfInt> &spins) {
  const HalfInt Jp = HalfInt::half(3);
  std::vector<CouplingCurvePoint> out;
  for (HalfInt I : spins) {
    if (I.twice() < 1) throw std::invalid_argument("nuclear spin must be at least 1/2");
    const HalfInt F = branch_F(I, Branch::pump);
    for (HalfInt m = -F; m <= F; m = m + 1)
      out.push_back({I, m, g_dot_closed(I, m, Polarization(1), Polarization(1), Jp),
                     g_dot_closed(I, m, Polarization(0), Polarization(1), Jp)});
  }
  return out;
}

}  // namespace raman

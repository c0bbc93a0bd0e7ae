#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qpolar/qpolar.hpp"

namespace qpolar::cli {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Input.

/// JSON {"matrix": [[...], ...]} or a whitespace grid, one row per line.
inline MatX parse_matrix(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw Error(ErrorCode::ParseError, "empty input");

  std::vector<std::vector<double>> rows;
  if (text[first] == '{') {
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ParseError, e.what());
    }
    if (!doc.contains("matrix") || !doc["matrix"].is_array()) {
      throw Error(ErrorCode::ParseError, "expected an object with a \"matrix\" array");
    }
    for (const auto& row : doc["matrix"]) {
      if (!row.is_array()) throw Error(ErrorCode::ParseError, "matrix rows must be arrays");
      std::vector<double> r;
      for (const auto& v : row) {
        if (!v.is_number()) throw Error(ErrorCode::ParseError, "matrix entries must be numbers");
        r.push_back(v.get<double>());
      }
      rows.push_back(std::move(r));
    }
  } else {
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      std::istringstream cells(line);
      std::vector<double> r;
      std::string cell;
      while (cells >> cell) {
        try {
          std::size_t used = 0;
          r.push_back(std::stod(cell, &used));
          if (used != cell.size()) throw std::invalid_argument(cell);
        } catch (const std::exception&) {
          throw Error(ErrorCode::ParseError, "not a number: " + cell);
        }
      }
      rows.push_back(std::move(r));
    }
  }

  if (rows.empty() || rows.front().empty()) throw Error(ErrorCode::ParseError, "matrix has no entries");
  const std::size_t cols = rows.front().size();
  MatX m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw Error(ErrorCode::ParseError, "ragged matrix rows");
    for (std::size_t j = 0; j < cols; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return m;
}

inline Mat4 require_4x4(const MatX& m) {
  if (m.rows() != 4 || m.cols() != 4) {
    throw Error(ErrorCode::ParseError,
                "expected a 4x4 matrix, got " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  return m;
}

// ---------------------------------------------------------------------------
// Forms.

/// The forms reported by identify: the sixteen M_{e(x)f}, the Minkowski form
/// I13, and the flip form F4 under its own family name.
inline std::vector<FormKind> supported_forms() {
  std::vector<FormKind> forms;
  for (int n = 0; n < 16; ++n) forms.push_back(FormKind::Basis(BasisIndex::from_flat(n)));
  forms.push_back(FormKind::Minkowski());
  forms.push_back(FormKind::Flip(2));
  return forms;
}

/// Accepts I22, I13, J4, F4, K4, M_ef / ef with e, f in {1, i, j, k}.
inline FormKind parse_form(std::string name) {
  std::string lower = name;
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (lower == "i22") return FormKind::Ipq(2, 2);
  if (lower == "i13" || lower == "minkowski" || lower == "lorentz") return FormKind::Minkowski();
  if (lower == "j4") return FormKind::Symplectic(2);
  if (lower == "f4") return FormKind::Flip(2);
  if (lower == "k4") return FormKind::K(2);
  if (lower.rfind("m_", 0) == 0) lower = lower.substr(2);
  if (lower.size() == 2) {
    const auto unit = [](char ch) -> std::optional<Unit> {
      switch (ch) {
        case '1': return Unit::one;
        case 'i': return Unit::i;
        case 'j': return Unit::j;
        case 'k': return Unit::k;
        default: return std::nullopt;
      }
    };
    const auto e = unit(lower[0]);
    const auto f = unit(lower[1]);
    if (e && f) return FormKind::Basis({*e, *f});
  }
  throw Error(ErrorCode::UnsupportedForm, "unknown form " + name);
}

/// The basis index with the same Gram matrix, for the 4x4 families that
/// coincide with a basis form.
inline std::optional<BasisIndex> as_basis(const FormKind& form) {
  using Tag = FormKind::Tag;
  switch (form.tag) {
    case Tag::Basis: return form.basis;
    case Tag::Ipq:
      if (form.p == 2 && form.q == 2) return BasisIndex{Unit::i, Unit::i};
      if (form.p + form.q == 4 && (form.p == 4 || form.q == 4)) return BasisIndex{Unit::one, Unit::one};
      return std::nullopt;
    case Tag::Symplectic: return form.n == 2 ? std::optional{BasisIndex{Unit::one, Unit::j}} : std::nullopt;
    case Tag::Flip: return form.n == 2 ? std::optional{BasisIndex{Unit::j, Unit::i}} : std::nullopt;
    case Tag::K: return form.n == 2 ? std::optional{BasisIndex{Unit::i, Unit::k}} : std::nullopt;
    case Tag::Minkowski: return std::nullopt;
  }
  return std::nullopt;
}

/// Picks the form for polar / rep / component when --form is absent: the
/// first member among I22, I13, J4, F4, K4, then the remaining basis forms.
inline FormKind detect_form(const Mat4& x, double tol) {
  std::vector<FormKind> order{FormKind::Ipq(2, 2), FormKind::Minkowski(), FormKind::Symplectic(2), FormKind::Flip(2),
                              FormKind::K(2)};
  for (int n = 0; n < 16; ++n) order.push_back(FormKind::Basis(BasisIndex::from_flat(n)));
  for (const FormKind& f : order) {
    if (is_in_group(x, f, tol).member) return f;
  }
  throw Error(ErrorCode::NotInGroup, "input is not in any supported group");
}

// ---------------------------------------------------------------------------
// Output.

inline json matrix_json(const MatX& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

inline json quat_json(const Quaternion& q) { return json::array({q.w, q.x, q.y, q.z}); }

inline json vec_json(const Vec3& v) { return json::array({v(0), v(1), v(2)}); }

inline json rep_json(const QuatTensorRep& rep) {
  return {{"c", rep.c}, {"p", vec_json(rep.p)}, {"q", vec_json(rep.q)}, {"r", vec_json(rep.r)},
          {"s", vec_json(rep.s)}, {"t", vec_json(rep.t)}};
}

inline json envelope(const json& input, const std::optional<FormKind>& form) {
  return {{"input", input},
          {"form", form ? json(form->name()) : json(nullptr)},
          {"result", json::object()},
          {"residuals", json::object()},
          {"notes", json::array()}};
}

struct Options {
  std::optional<std::string> form;
  double tol = kMembershipTol;
  std::string given = "B";
  std::uint64_t seed = 1;
  int count = 25;
};

// ---------------------------------------------------------------------------
// Commands.

inline json cmd_identify(const MatX& in, const Options& opt) {
  const Mat4 x = require_4x4(in);
  json out = envelope(matrix_json(x), std::nullopt);
  json forms = json::array();
  json members = json::array();
  for (const FormKind& f : supported_forms()) {
    const Membership m = is_in_group(x, f, opt.tol);
    forms.push_back({{"form", f.name()}, {"member", m.member}, {"residual", m.residual}});
    out["residuals"][f.name()] = m.residual;
    if (m.member) members.push_back(f.name());
  }
  out["result"] = {{"forms", forms}, {"members", members}};
  return out;
}

inline json factors_json(const PolarFactors& f) {
  return {{"orthogonal", matrix_json(f.orthogonal)}, {"posdef", matrix_json(f.posdef)}, {"iterations", f.iterations}};
}

inline void put_residuals(json& out, const PolarFactors& f) {
  out["residuals"] = {{"reconstruction", f.residual_reconstruction},
                      {"orthogonality", f.residual_orthogonality},
                      {"membership_orthogonal", f.residual_group_membership.first},
                      {"membership_posdef", f.residual_group_membership.second}};
}

inline json cmd_polar(const MatX& in, const Options& opt) {
  const Mat4 x = require_4x4(in);
  const FormKind form = opt.form ? parse_form(*opt.form) : detect_form(x, opt.tol);
  json out = envelope(matrix_json(x), form);
  if (!opt.form) out["notes"].push_back("form detected from membership");

  if (form.tag == FormKind::Tag::Minkowski) {
    const LorentzPolar p = polar_in_lorentz_detail(x, opt.tol);
    out["result"] = factors_json(p.factors);
    out["result"]["interpretation"] = {{"component", to_string(p.component)},
                                       {"prefix", matrix_json(p.prefix)},
                                       {"rotation", matrix_json(p.rotation)},
                                       {"boost", matrix_json(p.factors.posdef)}};
    out["notes"].push_back("X = prefix * rotation * boost; rotation fixes e1, boost is positive definite");
    put_residuals(out, p.factors);
    return out;
  }
  const auto idx = as_basis(form);
  if (!idx) throw Error(ErrorCode::UnsupportedForm, "polar is not available for " + form.name());
  PolarFactors f;
  if (*idx == BasisIndex{Unit::i, Unit::i}) {
    f = polar_in_G22(x, opt.tol);
  } else {
    f = polar_in_basis_form(x, *idx, opt.tol);
    const Similarity sim = similarity_to_canonical(*idx);
    out["notes"].push_back(std::string("reduced by orthogonal similarity to G_") + to_string(sim.canonical));
    if (sim.canonical == CanonicalForm::J4) out["notes"].push_back("symplectic factor computed by Newton iteration");
  }
  out["result"] = factors_json(f);
  put_residuals(out, f);
  return out;
}

inline json orthogonal_rep_json(const OrthogonalG22Rep& r) {
  json j = {{"case", r.case_tag}, {"pair_case", r.pair_case}, {"prefix", r.prefix},
            {"u", quat_json(r.u)},  {"v", quat_json(r.v)}};
  if (r.prefix) j["prefix_rep"] = rep_json(OrthogonalG22Rep::prefix_rep());
  return j;
}

inline json cmd_rep(const MatX& in, const Options& opt) {
  const Mat4 x = require_4x4(in);
  const FormKind form = opt.form ? parse_form(*opt.form) : detect_form(x, opt.tol);
  json out = envelope(matrix_json(x), form);
  if (!opt.form) out["notes"].push_back("form detected from membership");

  const auto idx = as_basis(form);
  if (form.tag == FormKind::Tag::Minkowski) {
    const LorentzRep r = rep_lorentz(x, opt.tol);
    out["result"] = {{"case", r.case_tag},
                     {"sign", r.sign},
                     {"prefix", r.prefix},
                     {"u", quat_json(r.u)},
                     {"hermitian", {{"a", r.a}, {"d", r.d}, {"x", r.x}, {"y", r.y}}},
                     {"boost", rep_json(r.boost)}};
    if (r.prefix) out["result"]["prefix_rep"] = rep_json(LorentzRep::prefix_rep());
    out["residuals"]["reconstruction"] = (r.reconstruct() - x).norm();
  } else if (idx && *idx == BasisIndex{Unit::i, Unit::i}) {
    const G22Rep r = rep_g22(x, opt.tol);
    out["result"] = {{"orthogonal", orthogonal_rep_json(r.orthogonal)}, {"posdef", rep_json(r.posdef)}};
    out["residuals"]["reconstruction"] = r.residual_reconstruction;
  } else {
    if (!is_in_group(x, form, opt.tol).member) throw Error(ErrorCode::NotInGroup, "input is not in " + form.name());
    const QuatTensorRep r = rep_of_matrix(x);
    out["result"] = {{"coefficients", rep_json(r)}};
    out["residuals"]["reconstruction"] = (r.reconstruct() - x).norm();
    out["notes"].push_back("structured representation exists for I22 and I13; general coefficients shown");
  }
  return out;
}

inline json cmd_complete(const MatX& block, const Options& opt) {
  if (block.rows() != block.cols()) throw Error(ErrorCode::DimensionMismatch, "completion needs a square block");
  json out = envelope(matrix_json(block), std::nullopt);
  MatX x;
  if (opt.given == "A") {
    x = complete_given_A(block);
  } else if (opt.given == "D") {
    x = complete_given_D(block);
  } else if (opt.given == "B") {
    x = complete_given_B(block);
  } else {
    throw Error(ErrorCode::ParseError, "--given must be A, D or B");
  }
  const auto n = static_cast<int>(block.rows());
  const FormKind form = FormKind::Ipq(n, n);
  out["form"] = form.name();
  out["result"] = {{"given", opt.given}, {"matrix", matrix_json(x)}, {"posdef", is_posdef_in_group(x, form, opt.tol)}};
  const MatX a = x.topLeftCorner(n, n);
  const MatX b = x.topRightCorner(n, n);
  const MatX d = x.bottomRightCorner(n, n);
  out["residuals"] = {{"membership", is_in_group(x, form, opt.tol).residual}, {"intertwining", (a * b - b * d).norm()}};
  return out;
}

inline json cmd_log(const MatX& p, const Options&) {
  json out = envelope(matrix_json(p), std::nullopt);
  const MatX l = log_posdef_Gnn(p);
  out["form"] = FormKind::Ipq(static_cast<int>(p.rows() / 2), static_cast<int>(p.rows() / 2)).name();
  out["result"] = {{"log", matrix_json(l)}};
  if (p.rows() == 4) {
    out["residuals"]["exp"] = (oracle::expm(Mat4(l)) - p).norm();
  } else {
    out["residuals"]["exp"] = nullptr;
    out["notes"].push_back("exp residual is computed for 4x4 input only");
  }
  return out;
}

inline json cmd_component(const MatX& in, const Options& opt) {
  const Mat4 x = require_4x4(in);
  FormKind form = FormKind::Ipq(2, 2);
  if (opt.form) {
    form = parse_form(*opt.form);
  } else if (!is_in_group(x, form, opt.tol).member && is_in_group(x, FormKind::Minkowski(), opt.tol).member) {
    form = FormKind::Minkowski();
  }
  json out = envelope(matrix_json(x), form);
  const ComponentLabel label = component_of(x, form, opt.tol);
  out["result"] = {{"component", to_string(label.component)},
                   {"identity_component", label.is_identity_component()},
                   {"det_sign", label.det_sign}};
  if (form.tag == FormKind::Tag::Minkowski) {
    out["result"]["x11_sign"] = label.x11_sign;
  } else {
    out["result"]["det_a_sign"] = label.det_a_sign;
    out["result"]["det_d_sign"] = label.det_d_sign;
  }
  out["residuals"]["membership"] = is_in_group(x, form, opt.tol).residual;
  return out;
}

// ---------------------------------------------------------------------------
// Self test.

struct SuiteResult {
  std::string name;
  int cases = 0;
  int failures = 0;
  double worst = 0.0;
  std::string first_error;
};

/// Runs `count` seeded cases of one property; each case returns its worst
/// residual, compared against `bound`.
inline SuiteResult run_suite(const std::string& name, int count, std::uint64_t seed, double bound,
                             const std::function<double(std::uint64_t, int)>& body) {
  SuiteResult r;
  r.name = name;
  for (int n = 0; n < count; ++n) {
    ++r.cases;
    try {
      const double w = body(seed + static_cast<std::uint64_t>(n) * 7919u, n);
      r.worst = std::max(r.worst, w);
      if (!(w <= bound)) ++r.failures;
    } catch (const std::exception& e) {
      ++r.failures;
      if (r.first_error.empty()) r.first_error = e.what();
    }
  }
  return r;
}

inline double worst_of(const PolarFactors& f) {
  return std::max({f.residual_reconstruction, f.residual_orthogonality, f.residual_group_membership.first,
                   f.residual_group_membership.second});
}

inline json cmd_selftest(const Options& opt) {
  const int count = std::max(0, opt.count);
  const std::uint64_t seed = opt.seed;
  const std::array<Component, 4> g22{Component::so_plus, Component::det_plus_blocks_negative,
                                     Component::det_minus_a_positive, Component::det_minus_a_negative};
  const std::array<Component, 4> lor{Component::proper_orthochronous, Component::proper_nonorthochronous,
                                     Component::improper_orthochronous, Component::improper_nonorthochronous};
  std::vector<SuiteResult> suites;

  suites.push_back(run_suite("sqrt_2x2", count, seed, 1e-12, [](std::uint64_t s, int) {
    oracle::Rng rng(s);
    const Mat2 l = (Mat2() << rng.uniform(0.1, 2.0), 0.0, rng.uniform(-2.0, 2.0), rng.uniform(0.1, 2.0)).finished();
    const Mat2 y = l * l.transpose();
    const Mat2 r = posdef_sqrt_2x2(y);
    return (r * r - y).norm() / detail::scale_of(y.norm());
  }));
  suites.push_back(run_suite("completion", count, seed, 1e-11, [](std::uint64_t s, int) {
    oracle::Rng rng(s);
    MatX b(2, 2);
    for (int i = 0; i < 4; ++i) b(i / 2, i % 2) = rng.uniform(-3.0, 3.0);
    const MatX x = complete_given_B(b);
    const MatX a = x.topLeftCorner(2, 2);
    const MatX d = x.bottomRightCorner(2, 2);
    const double membership = is_in_group(x, FormKind::Ipq(2, 2)).residual / detail::scale_of(x.norm());
    return std::max(membership, (a * b - b * d).norm() / detail::scale_of(x.squaredNorm()));
  }));
  suites.push_back(run_suite("log", count, seed, 1e-9, [](std::uint64_t s, int) {
    oracle::Rng rng(s);
    MatX b(2, 2);
    for (int i = 0; i < 4; ++i) b(i / 2, i % 2) = rng.uniform(-3.0, 3.0);
    const MatX p = complete_given_B(b);
    return (oracle::expm(Mat4(log_posdef_Gnn(p))) - p).norm() / detail::scale_of(p.norm());
  }));
  suites.push_back(run_suite("polar_g22", count, seed, 1e-9, [&](std::uint64_t s, int n) {
    const Mat4 x = oracle::sample_other_components(FormKind::Ipq(2, 2), g22[n % 4], s, 2.0);
    const PolarFactors f = polar_in_G22(x);
    const double oracle_gap = (f.posdef - oracle::newton_polar(x).posdef).norm();
    return oracle_gap <= 1e-8 ? worst_of(f) : oracle_gap;
  }));
  suites.push_back(run_suite("polar_basis_forms", count, seed, 1e-9, [](std::uint64_t s, int n) {
    const BasisIndex idx = BasisIndex::from_flat(n % 16);
    return worst_of(polar_in_basis_form(oracle::sample_group_element(FormKind::Basis(idx), s, 2.0), idx));
  }));
  suites.push_back(run_suite("polar_lorentz", count, seed, 1e-9, [&](std::uint64_t s, int n) {
    const Mat4 x = oracle::sample_other_components(FormKind::Minkowski(), lor[n % 4], s, 2.0);
    return std::max(worst_of(polar_in_lorentz(x)), (rep_lorentz(x).reconstruct() - x).norm());
  }));
  suites.push_back(run_suite("rep_g22", count, seed, 1e-9, [&](std::uint64_t s, int n) {
    const Mat4 x = oracle::sample_other_components(FormKind::Ipq(2, 2), g22[n % 4], s, 2.0);
    return rep_g22(x).residual_reconstruction;
  }));
  suites.push_back(run_suite("components", count, seed, 0.0, [&](std::uint64_t s, int n) {
    const Component g = g22[n % 4];
    const Component l = lor[n % 4];
    const bool ok_g = component_of(oracle::sample_other_components(FormKind::Ipq(2, 2), g, s), FormKind::Ipq(2, 2))
                          .component == g;
    const bool ok_l =
        component_of(oracle::sample_other_components(FormKind::Minkowski(), l, s), FormKind::Minkowski()).component ==
        l;
    return ok_g && ok_l ? 0.0 : 1.0;
  }));

  json out = envelope(nullptr, std::nullopt);
  json list = json::array();
  bool pass = true;
  for (const SuiteResult& r : suites) {
    pass = pass && r.failures == 0;
    json j = {{"suite", r.name}, {"cases", r.cases}, {"failures", r.failures}, {"pass", r.failures == 0}};
    if (!r.first_error.empty()) j["first_error"] = r.first_error;
    list.push_back(j);
    out["residuals"][r.name] = r.worst;
  }
  out["input"] = {{"seed", seed}, {"count", count}};
  out["result"] = {{"pass", pass}, {"suites", list}};
  return out;
}

inline json error_json(const std::string& command, const Error& e) {
  json out = envelope(nullptr, std::nullopt);
  out["result"] = {{"error", to_string(e.code())}, {"message", e.what()}, {"command", command}};
  return out;
}

}  // namespace qpolar::cli

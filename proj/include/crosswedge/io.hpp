#pragma once

// Deterministic text output.  Every floating-point value is serialized with
// 17 significant digits so files round-trip exactly and reruns are
// byte-identical.  JSON is emitted by hand for the same reason.

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "crosswedge/cross.hpp"
#include "crosswedge/disc_functional.hpp"
#include "crosswedge/extension.hpp"
#include "crosswedge/harmonic_measure.hpp"

namespace crosswedge {

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 8);
  for (const char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

// Minimal ordered JSON emitter.
class JsonWriter {
 public:
  explicit JsonWriter(std::ostream& os) : os_(os) {}

  JsonWriter& begin_object() { sep(); os_ << '{'; fresh_ = true; return *this; }
  JsonWriter& end_object() { os_ << '}'; fresh_ = false; return *this; }
  JsonWriter& begin_array() { sep(); os_ << '['; fresh_ = true; return *this; }
  JsonWriter& end_array() { os_ << ']'; fresh_ = false; return *this; }

  JsonWriter& key(const std::string& k) {
    sep();
    os_ << '"' << json_escape(k) << "\":";
    fresh_ = true;
    return *this;
  }
  JsonWriter& value(double v) { sep(); os_ << fmt17(v); fresh_ = false; return *this; }
  JsonWriter& value(int v) { sep(); os_ << v; fresh_ = false; return *this; }
  JsonWriter& value(std::uint64_t v) { sep(); os_ << v; fresh_ = false; return *this; }
  JsonWriter& value(bool v) { sep(); os_ << (v ? "true" : "false"); fresh_ = false; return *this; }
  JsonWriter& value(const std::string& v) {
    sep();
    os_ << '"' << json_escape(v) << '"';
    fresh_ = false;
    return *this;
  }
  JsonWriter& value(const char* v) { return value(std::string(v)); }
  JsonWriter& value(Complex v) {
    sep();
    os_ << '[' << fmt17(v.real()) << ',' << fmt17(v.imag()) << ']';
    fresh_ = false;
    return *this;
  }

 private:
  void sep() {
    if (!fresh_) os_ << ',';
    fresh_ = true;
  }
  std::ostream& os_;
  bool fresh_ = true;
};

// ---------------------------------------------------------------------------
// CSV exports.

inline void write_field_csv(std::ostream& os, const HarmonicMeasureField& field) {
  os << "x,y,omega,stderr,method\n";
  for (int j = 0; j < field.grid.ny; ++j) {
    for (int i = 0; i < field.grid.nx; ++i) {
      const auto& cell = field.at(i, j);
      if (!cell) continue;
      os << fmt17(field.grid.x(i)) << ',' << fmt17(field.grid.y(j)) << ','
         << fmt17(cell->value) << ',' << fmt17(cell->std_error) << ','
         << to_string(cell->method) << '\n';
    }
  }
}

inline void write_slice_csv(std::ostream& os, const WedgeSlice& slice) {
  os << "x,y,u,v,omega_sum,verdict\n";
  for (int j = 0; j < slice.grid.ny; ++j) {
    for (int i = 0; i < slice.grid.nx; ++i) {
      const auto& cell = slice.cells[static_cast<std::size_t>(j) * slice.grid.nx + i];
      if (!cell) continue;
      os << fmt17(slice.grid.x(i)) << ',' << fmt17(slice.grid.y(j)) << ','
         << fmt17(slice.w.real()) << ',' << fmt17(slice.w.imag()) << ','
         << fmt17(cell->omega_sum) << ',' << to_string(cell->verdict) << '\n';
    }
  }
}

inline void write_certify_csv(std::ostream& os,
                              const std::vector<TwoConstantsRow>& rows,
                              const std::vector<double>* actual_err = nullptr) {
  os << "x_z,y_z,x_w,y_w,omega_sum,bound,actual_err\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const TwoConstantsRow& r = rows[i];
    os << fmt17(r.z.real()) << ',' << fmt17(r.z.imag()) << ',' << fmt17(r.w.real())
       << ',' << fmt17(r.w.imag()) << ',' << fmt17(r.omega_sum) << ','
       << fmt17(r.rhs) << ',' << (actual_err ? fmt17((*actual_err)[i]) : std::string())
       << '\n';
  }
}

// ---------------------------------------------------------------------------
// JSON / JSONL exports.

inline void write_samples_jsonl(std::ostream& os, const CrossSamples& samples) {
  for (const CrossSample& s : samples.samples) {
    JsonWriter w(os);
    w.begin_object();
    w.key("z").value(s.z);
    w.key("w").value(s.w);
    w.key("re").value(s.value.real());
    w.key("im").value(s.value.imag());
    w.key("stratum").value(to_string(s.stratum));
    w.end_object();
    os << '\n';
  }
}

inline void write_disc_functional_json(std::ostream& os,
                                       const DiscFunctionalResult& res,
                                       std::uint64_t seed) {
  JsonWriter w(os);
  w.begin_object();
  w.key("value").value(res.value);
  w.key("feasibility").value(res.feasibility);
  w.key("evaluations").value(res.evaluations);
  w.key("seed").value(seed);
  w.key("base").begin_array();
  for (const Complex b : res.best.base) w.value(b);
  w.end_array();
  w.key("coefficients").begin_array();
  for (const auto& coord : res.best.coef) {
    w.begin_array();
    for (const Complex c : coord) w.value(c);
    w.end_array();
  }
  w.end_array();
  w.end_object();
  os << '\n';
}

inline void write_domain_json(JsonWriter& w, const PlanarDomain& d, const ArcSet* arcs) {
  w.begin_object();
  switch (d.kind()) {
    case DomainKind::UnitDisc:
      w.key("kind").value("disc");
      break;
    case DomainKind::Polygon: {
      w.key("kind").value("polygon");
      w.key("vertices").begin_array();
      for (const Complex v : d.vertices()) w.value(v);
      w.end_array();
      break;
    }
    case DomainKind::SlitSquare:
      w.key("kind").value("slit_square");
      w.key("a").value(d.slit_half_width());
      break;
  }
  if (arcs) {
    w.key("arcs").begin_array();
    for (const Interval& iv : arcs->intervals()) {
      w.begin_array();
      w.value(iv.lo);
      w.value(iv.hi);
      w.end_array();
    }
    w.end_array();
  }
  w.end_object();
}

inline void write_fit_json(std::ostream& os, const TensorFit& fit,
                           const CrossSpec& spec) {
  JsonWriter w(os);
  w.begin_object();
  w.key("degrees").begin_array().value(fit.deg_z).value(fit.deg_w).end_array();
  w.key("basis").value(fit.basis);
  w.key("coefficients").begin_array();
  for (int j = 0; j <= fit.deg_z; ++j) {
    w.begin_array();
    for (int k = 0; k <= fit.deg_w; ++k) w.value(fit.at(j, k));
    w.end_array();
  }
  w.end_array();
  w.key("eps_w").value(fit.eps_w);
  w.key("eps_ab").value(fit.eps_ab);
  w.key("sup_w_norm").value(fit.sup_w_norm);
  w.key("sup_ab_norm").value(fit.sup_ab_norm);
  w.key("ridge").value(fit.ridge);
  w.key("condition").value(fit.condition);
  w.key("seed").value(fit.seed);
  w.key("domain_d");
  write_domain_json(w, spec.d, &spec.a);
  w.key("domain_g");
  write_domain_json(w, spec.g, &spec.b);
  w.end_object();
  os << '\n';
}

}  // namespace crosswedge

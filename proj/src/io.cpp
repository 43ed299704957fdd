#include "nuctrace/io.hpp"

#include <fstream>

namespace nuctrace::io {

namespace {

json axis_json(const Axis& axis) {
  json a;
  a["count"] = axis.size();
  a["periodic"] = axis.periodic();
  if (axis.periodic()) {
    a["extent"] = axis.extent();
  } else if (axis.uniform_spacing()) {
    a["min"] = axis.nodes()[0];
    a["max"] = axis.nodes()[0] + axis.spacing() * axis.size();
  } else {
    a["nodes"] = std::vector<Real>(axis.nodes().data(), axis.nodes().data() + axis.size());
    a["weights"] =
        std::vector<Real>(axis.quad_weights().data(), axis.quad_weights().data() + axis.size());
  }
  return a;
}

Axis axis_from_json(const json& a) {
  const int count = a.at("count").get<int>();
  const bool periodic = a.value("periodic", false);
  if (periodic) return Axis::periodic_uniform(count, a.at("extent").get<Real>());
  if (a.contains("nodes")) {
    auto nodes = a.at("nodes").get<std::vector<Real>>();
    auto weights = a.at("weights").get<std::vector<Real>>();
    return Axis(Eigen::Map<RVector>(nodes.data(), static_cast<Eigen::Index>(nodes.size())),
                Eigen::Map<RVector>(weights.data(), static_cast<Eigen::Index>(weights.size())));
  }
  return Axis::uniform(a.at("min").get<Real>(), a.at("max").get<Real>(), count);
}

std::string format_name(ValueFormat f) { return f == ValueFormat::kCsv ? "csv" : "binary-le-f64"; }

ValueFormat format_from_name(const std::string& name) {
  if (name == "csv") return ValueFormat::kCsv;
  if (name == "binary-le-f64") return ValueFormat::kBinary;
  throw std::invalid_argument("io: unknown value format '" + name + "'");
}

void write_values(const CVector& values, const std::filesystem::path& path, ValueFormat format) {
  if (format == ValueFormat::kCsv) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("io: cannot write " + path.string());
    out.precision(17);
    for (Eigen::Index i = 0; i < values.size(); ++i)
      out << values[i].real() << "," << values[i].imag() << "\n";
    return;
  }
  // interleaved float64 pairs, little-endian host assumed
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("io: cannot write " + path.string());
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double re = values[i].real(), im = values[i].imag();
    out.write(reinterpret_cast<const char*>(&re), sizeof(double));
    out.write(reinterpret_cast<const char*>(&im), sizeof(double));
  }
}

CVector read_values(const std::filesystem::path& path, ValueFormat format, Eigen::Index count) {
  CVector values(count);
  if (format == ValueFormat::kCsv) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("io: cannot read " + path.string());
    std::string line;
    for (Eigen::Index i = 0; i < count; ++i) {
      if (!std::getline(in, line)) throw std::runtime_error("io: short value file " + path.string());
      const auto comma = line.find(',');
      if (comma == std::string::npos)
        throw std::runtime_error("io: malformed CSV line in " + path.string());
      values[i] = Complex(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
    }
    return values;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("io: cannot read " + path.string());
  for (Eigen::Index i = 0; i < count; ++i) {
    double re = 0.0, im = 0.0;
    in.read(reinterpret_cast<char*>(&re), sizeof(double));
    in.read(reinterpret_cast<char*>(&im), sizeof(double));
    if (!in) throw std::runtime_error("io: short value file " + path.string());
    values[i] = Complex(re, im);
  }
  return values;
}

void write_json(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("io: cannot write " + path.string());
  out << j.dump(2) << "\n";
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("io: cannot read " + path.string());
  return json::parse(in);
}

std::filesystem::path value_path_for(const std::filesystem::path& json_path, ValueFormat format) {
  std::filesystem::path p = json_path;
  p.replace_extension(format == ValueFormat::kCsv ? ".csv" : ".bin");
  return p;
}

}  // namespace

json grid_descriptor(const ProductGrid& grid) {
  json g;
  g["schema"] = "1";
  g["axes"] = json::array();
  for (int k = 0; k < grid.dim(); ++k) g["axes"].push_back(axis_json(grid.axis(k)));
  return g;
}

GridPtr grid_from_descriptor(const json& descriptor) {
  std::vector<Axis> axes;
  for (const json& a : descriptor.at("axes")) axes.push_back(axis_from_json(a));
  return ProductGrid::make(std::move(axes));
}

void save_function(const SampledFunction& f, const std::filesystem::path& json_path,
                   ValueFormat format) {
  const auto vpath = value_path_for(json_path, format);
  json j;
  j["schema"] = "1";
  j["grid"] = grid_descriptor(*f.grid());
  j["values"] = {{"path", vpath.filename().string()},
                 {"format", format_name(format)},
                 {"layout", "row-major interleaved re,im"}};
  write_json(j, json_path);
  write_values(f.values(), vpath, format);
}

SampledFunction load_function(const std::filesystem::path& json_path) {
  const json j = read_json(json_path);
  GridPtr grid = grid_from_descriptor(j.at("grid"));
  const auto& v = j.at("values");
  const ValueFormat format = format_from_name(v.at("format").get<std::string>());
  const auto vpath = json_path.parent_path() / v.at("path").get<std::string>();
  return SampledFunction(grid, read_values(vpath, format, grid->size()));
}

void save_real_function(const RVector& values, const GridPtr& grid,
                        const std::filesystem::path& json_path, ValueFormat format) {
  save_function(SampledFunction(grid, values.cast<Complex>()), json_path, format);
}

std::pair<GridPtr, RVector> load_real_function(const std::filesystem::path& json_path) {
  const SampledFunction f = load_function(json_path);
  for (Eigen::Index i = 0; i < f.values().size(); ++i) {
    if (f.values()[i].imag() != 0.0)
      throw std::runtime_error("io: expected a real-valued function file");
  }
  return {f.grid(), f.values().real()};
}

void save_tf_dump(const SampledFunction& F, const TFGrid& tf,
                  const std::filesystem::path& json_path, ValueFormat format) {
  require_same_grid(F.grid(), tf.joint(), "save_tf_dump");
  const auto vpath = value_path_for(json_path, format);
  json j;
  j["schema"] = "1";
  j["conventions"] = {{"angular_frequency", true},
                      {"d", tf.d()},
                      {"box_half_width", tf.half_width()},
                      {"frequency_half_width", -tf.freq()->axis(0).nodes()[0]}};
  j["grid"] = grid_descriptor(*F.grid());
  j["values"] = {{"path", vpath.filename().string()},
                 {"format", format_name(format)},
                 {"layout", "row-major interleaved re,im"}};
  write_json(j, json_path);
  write_values(F.values(), vpath, format);
}

json spectral_report_json(const SpectralReport& report) {
  json j;
  j["schema"] = "1";
  json ev = json::array();
  for (Eigen::Index i = 0; i < report.eigenvalues.size(); ++i)
    ev.push_back({report.eigenvalues[i].real(), report.eigenvalues[i].imag()});
  j["eigenvalues"] = std::move(ev);
  j["matrix_trace"] = {report.matrix_trace.real(), report.matrix_trace.imag()};
  j["eigenvalue_sum"] = {report.eigenvalue_sum.real(), report.eigenvalue_sum.imag()};
  j["pairing_trace"] = {report.pairing_trace.real(), report.pairing_trace.imag()};
  if (report.closed_form_target) {
    j["closed_form_target"] = *report.closed_form_target;
    j["target_provenance"] = report.target_provenance;
  }
  if (report.truncation_tail_bound) j["truncation_tail_bound"] = *report.truncation_tail_bound;
  j["residuals"] = report.residuals;
  j["context"] = report.context;
  return j;
}

SpectralReport spectral_report_from_json(const json& j) {
  SpectralReport report;
  const auto& ev = j.at("eigenvalues");
  report.eigenvalues.resize(static_cast<Eigen::Index>(ev.size()));
  for (size_t i = 0; i < ev.size(); ++i)
    report.eigenvalues[static_cast<Eigen::Index>(i)] =
        Complex(ev[i][0].get<Real>(), ev[i][1].get<Real>());
  const auto cplx = [&](const char* key) {
    return Complex(j.at(key)[0].get<Real>(), j.at(key)[1].get<Real>());
  };
  report.matrix_trace = cplx("matrix_trace");
  report.eigenvalue_sum = cplx("eigenvalue_sum");
  report.pairing_trace = cplx("pairing_trace");
  if (j.contains("closed_form_target")) {
    report.closed_form_target = j.at("closed_form_target").get<Real>();
    report.target_provenance = j.value("target_provenance", "");
  }
  if (j.contains("truncation_tail_bound"))
    report.truncation_tail_bound = j.at("truncation_tail_bound").get<Real>();
  report.residuals = j.at("residuals").get<std::map<std::string, Real>>();
  report.context = j.at("context").get<std::map<std::string, Real>>();
  return report;
}

void write_spectral_report(const SpectralReport& report, const std::filesystem::path& json_path,
                           const std::filesystem::path& eigenvalue_csv_path) {
  write_json(spectral_report_json(report), json_path);
  std::ofstream csv(eigenvalue_csv_path);
  if (!csv) throw std::runtime_error("io: cannot write " + eigenvalue_csv_path.string());
  csv.precision(17);
  csv << "index,re,im,modulus\n";
  for (Eigen::Index i = 0; i < report.eigenvalues.size(); ++i) {
    const Complex& l = report.eigenvalues[i];
    csv << i << "," << l.real() << "," << l.imag() << "," << std::abs(l) << "\n";
  }
}

json space_descriptor_json(const SpaceDescriptor& space) {
  return std::visit(
      [&](const auto& s) -> json {
        using S = std::decay_t<decltype(s)>;
        json j;
        if constexpr (std::is_same_v<S, MixedSpace>) {
          j["kind"] = "mixed";
          j["exponents"] = s.exponents.entries();
          j["convention"] =
              s.convention == WeightConvention::kPointwise ? "pointwise" : "density";
          const RVector& w = s.weight.values();
          if ((w.array() == w[0]).all()) {
            j["weight"] = {{"kind", "constant"}, {"value", w[0]}};
          } else {
            j["weight"] = {{"kind", "values"},
                           {"data", std::vector<Real>(w.data(), w.data() + w.size())}};
          }
        } else {
          j["kind"] = "variable";
          const RVector& p = s.exponent.values();
          if ((p.array() == p[0]).all()) {
            j["exponent"] = {{"kind", "constant"}, {"value", p[0]}};
          } else {
            j["exponent"] = {{"kind", "values"},
                             {"data", std::vector<Real>(p.data(), p.data() + p.size())}};
          }
        }
        return j;
      },
      space);
}

SpaceDescriptor space_descriptor_from_json(const json& j, const GridPtr& grid) {
  const std::string kind = j.at("kind").get<std::string>();
  const auto real_field = [&](const json& f) -> RVector {
    const std::string k = f.at("kind").get<std::string>();
    if (k == "constant") return RVector::Constant(grid->size(), f.at("value").get<Real>());
    if (k == "values") {
      auto data = f.at("data").get<std::vector<Real>>();
      if (static_cast<Eigen::Index>(data.size()) != grid->size())
        throw std::invalid_argument("io: space descriptor data length mismatch");
      return Eigen::Map<RVector>(data.data(), static_cast<Eigen::Index>(data.size()));
    }
    throw std::invalid_argument("io: unknown field kind '" + k + "'");
  };
  if (kind == "mixed") {
    MixedSpace s{ExponentTuple(j.at("exponents").get<std::vector<Real>>()),
                 WeightFunction(grid, real_field(j.at("weight"))),
                 j.value("convention", "pointwise") == std::string("density")
                     ? WeightConvention::kDensity
                     : WeightConvention::kPointwise};
    return s;
  }
  if (kind == "variable") {
    return VariableExponentSpace{VariableExponent(grid, real_field(j.at("exponent")))};
  }
  throw std::invalid_argument("io: unknown space kind '" + kind + "'");
}

void save_representation(const NuclearRepresentation& T,
                         const std::filesystem::path& manifest_path, const std::string& stem,
                         ValueFormat format) {
  const auto dir = manifest_path.parent_path();
  json j;
  j["schema"] = "1";
  j["terms"] = T.terms();
  j["order_r"] = T.order();
  if (T.has_spaces()) {
    j["source_space"] = space_descriptor_json(T.source_space());
    j["target_space"] = space_descriptor_json(T.target_space());
  }
  j["pairs"] = json::array();
  for (int n = 0; n < T.terms(); ++n) {
    const std::string gname = stem + "_g" + std::to_string(n) + ".json";
    const std::string hname = stem + "_h" + std::to_string(n) + ".json";
    save_function(T.g(n), dir / gname, format);
    save_function(T.h(n), dir / hname, format);
    j["pairs"].push_back({{"g", gname}, {"h", hname}});
  }
  write_json(j, manifest_path);
}

NuclearRepresentation load_representation(const std::filesystem::path& manifest_path) {
  const json j = read_json(manifest_path);
  const auto dir = manifest_path.parent_path();
  std::vector<SampledFunction> g, h;
  for (const json& pair : j.at("pairs")) {
    g.push_back(load_function(dir / pair.at("g").get<std::string>()));
    h.push_back(load_function(dir / pair.at("h").get<std::string>()));
  }
  NuclearRepresentation T(std::move(g), std::move(h), j.at("order_r").get<Real>());
  if (j.contains("source_space")) {
    T.set_spaces(space_descriptor_from_json(j.at("source_space"), T.source_grid()),
                 space_descriptor_from_json(j.at("target_space"), T.target_grid()));
  }
  return T;
}

}  // namespace nuctrace::io

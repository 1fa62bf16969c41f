#include "output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>

namespace kcas::cli {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Csv::Csv(std::vector<std::string> header) : cols_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) text_ += (i ? "," : "") + header[i];
  text_ += "\n";
}

void Csv::row(const std::vector<double>& values) {
  if (values.size() != cols_) throw std::logic_error("CSV row width mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) text_ += (i ? "," : "") + fmt(values[i]);
  text_ += "\n";
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

namespace {

void dump(const nlohmann::ordered_json& j, int indent, std::string& out) {
  const std::string pad(indent + 2, ' ');
  switch (j.type()) {
    case nlohmann::ordered_json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      std::size_t i = 0;
      for (auto it = j.begin(); it != j.end(); ++it, ++i) {
        out += pad + nlohmann::ordered_json(it.key()).dump() + ": ";
        dump(it.value(), indent + 2, out);
        out += i + 1 < j.size() ? ",\n" : "\n";
      }
      out += std::string(indent, ' ') + "}";
      return;
    }
    case nlohmann::ordered_json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto& v : j) flat = flat && !v.is_structured();
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          dump(j[i], indent, out);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        out += pad;
        dump(j[i], indent + 2, out);
        out += i + 1 < j.size() ? ",\n" : "\n";
      }
      out += std::string(indent, ' ') + "]";
      return;
    }
    case nlohmann::ordered_json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? fmt(v) : "null";
      return;
    }
    default: out += j.dump();
  }
}

std::string script_header(const std::string& data_path) {
  return "import matplotlib\nmatplotlib.use(\"Agg\")\nimport matplotlib.pyplot as plt\n\nDATA = \"" + data_path +
         "\"\n";
}

}  // namespace

std::string dump_json(const nlohmann::ordered_json& j) {
  std::string out;
  dump(j, 0, out);
  out += "\n";
  return out;
}

void emit_csv_plot(const std::string& data_path, const std::string& x, const std::vector<std::string>& ys,
                   bool log_x, const std::string& title) {
  if (data_path.empty() || data_path == "-") throw std::runtime_error("--emit-plot needs --output");
  std::string s = script_header(data_path);
  s += "import csv\n\nwith open(DATA) as f:\n    rows = list(csv.DictReader(f))\n";
  s += "x = [float(r[\"" + x + "\"]) for r in rows]\n";
  s += "fig, ax = plt.subplots()\n";
  for (const std::string& y : ys) s += "ax.plot(x, [float(r[\"" + y + "\"]) for r in rows], label=\"" + y + "\")\n";
  if (log_x) s += "ax.set_xscale(\"log\")\n";
  s += "ax.set_xlabel(\"" + x + "\")\nax.set_title(\"" + title + "\")\nax.legend()\n";
  s += "fig.savefig(DATA.rsplit(\".\", 1)[0] + \".png\", dpi=150)\n";
  write_text(data_path + ".plot.py", s);
}

void emit_samples_plot(const std::string& data_path, const std::string& title) {
  if (data_path.empty() || data_path == "-") throw std::runtime_error("--emit-plot needs --output");
  std::string s = script_header(data_path);
  s += "import json\n\nwith open(DATA) as f:\n    doc = json.load(f)\n";
  s += "samples = doc.get(\"samples\", [])\nif not samples:\n    raise SystemExit(\"no samples in \" + DATA + \"; rerun with --samples\")\n";
  s += "x = [p[0] for p in samples]\n";
  s += "fig, ax = plt.subplots()\nax.plot(x, [p[1] for p in samples], \".-\", label=\"Re\")\n";
  s += "ax.plot(x, [p[2] for p in samples], \".-\", label=\"Im\")\n";
  s += "ax.set_xscale(\"log\")\nax.set_title(\"" + title + "\")\nax.legend()\n";
  s += "fig.savefig(DATA.rsplit(\".\", 1)[0] + \".png\", dpi=150)\n";
  write_text(data_path + ".plot.py", s);
}

}  // namespace kcas::cli

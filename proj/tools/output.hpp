#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace kcas::cli {

std::string fmt(double v);  // %.17g

class Csv {
 public:
  explicit Csv(std::vector<std::string> header);
  void row(const std::vector<double>& values);
  std::string str() const { return text_; }

 private:
  std::size_t cols_;
  std::string text_;
};

// Writes to path, or stdout for "" and "-". Always LF line endings.
void write_text(const std::string& path, const std::string& text);

// Deterministic JSON: fixed key order from the ordered_json type, numbers in %.17g.
std::string dump_json(const nlohmann::ordered_json& j);

// Companion matplotlib script next to the data file.
void emit_csv_plot(const std::string& data_path, const std::string& x, const std::vector<std::string>& ys,
                   bool log_x, const std::string& title);
void emit_samples_plot(const std::string& data_path, const std::string& title);

}  // namespace kcas::cli

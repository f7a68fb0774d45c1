#pragma once

#include <fstream>
#include <string>
#include <utility>
#include <vector>

namespace sideband::csv {

// Minimal CSV emitter: header row, numeric rows formatted with %.17g so
// output is byte-stable, trailing '# key=value' metadata block.
class Writer {
 public:
  Writer(const std::string& path, const std::vector<std::string>& columns);

  void row(const std::vector<double>& values);
  void row_mixed(const std::vector<std::string>& cells);
  void metadata(const std::vector<std::pair<std::string, std::string>>& kv);

  static std::string format(double v);

 private:
  std::ofstream out_;
  std::size_t n_cols_;
};

}  // namespace sideband::csv

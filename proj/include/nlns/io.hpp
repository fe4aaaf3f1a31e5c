#pragma once

#include <cstdio>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "nlns/functionals.hpp"
#include "nlns/grid.hpp"

namespace nlns {

struct NamedField {
  std::string name;
  Field field;
};

/// Binary field snapshot: "NLNS", u16 version, u8 dim, u32 n, f64 L,
/// u16 field count, then per field a u8 name length, the name, and n^dim
/// f64 values. All integers and floats little-endian.
void write_snapshot(const std::string& path, const std::vector<NamedField>& fields);
std::vector<NamedField> read_snapshot(const std::string& path);

/// Density and velocity components u0..u{dim-1} of a state.
std::vector<NamedField> state_fields(const State& state);

std::string format_csv_number(double v);

/// Appends diagnostics rows to a CSV file, flushing after each row so a
/// failed run leaves everything recorded so far on disk.
class DiagnosticsWriter {
 public:
  explicit DiagnosticsWriter(const std::string& path);
  ~DiagnosticsWriter();
  DiagnosticsWriter(const DiagnosticsWriter&) = delete;
  DiagnosticsWriter& operator=(const DiagnosticsWriter&) = delete;

  void write(const DiagnosticsRecord& record);

 private:
  std::FILE* file_;
};

std::string diagnostics_csv(const std::vector<DiagnosticsRecord>& records);
std::vector<DiagnosticsRecord> read_diagnostics_csv(const std::string& path);

/// Rewrites a diagnostics file in place so its residual column holds the
/// energy budget residual of the whole series.
void fill_budget_column(const std::string& path);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace nlns

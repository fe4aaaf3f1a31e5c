#include "nlns/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "nlns/error.hpp"

namespace nlns {
namespace {

static_assert(std::endian::native == std::endian::little,
              "snapshot encoding assumes a little-endian host");

constexpr char kMagic[4] = {'N', 'L', 'N', 'S'};
constexpr std::uint16_t kVersion = 1;

template <class T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& in, const std::string& path) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) throw IoError("truncated snapshot: " + path);
  return v;
}

}  // namespace

void write_snapshot(const std::string& path, const std::vector<NamedField>& fields) {
  if (fields.empty()) throw ValidationError("snapshot needs at least one field");
  const TorusGrid& grid = fields.front().field.grid();
  for (const auto& f : fields) {
    require_same_grid(grid, f.field.grid(), "write_snapshot");
    if (f.name.empty() || f.name.size() > 255)
      throw ValidationError("snapshot field names must have 1 to 255 bytes");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open snapshot for writing: " + path);
  out.write(kMagic, 4);
  put<std::uint16_t>(out, kVersion);
  put<std::uint8_t>(out, static_cast<std::uint8_t>(grid.dim()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(grid.n()));
  put<double>(out, grid.half_length());
  put<std::uint16_t>(out, static_cast<std::uint16_t>(fields.size()));
  for (const auto& f : fields) {
    put<std::uint8_t>(out, static_cast<std::uint8_t>(f.name.size()));
    out.write(f.name.data(), static_cast<std::streamsize>(f.name.size()));
    out.write(reinterpret_cast<const char*>(f.field.data().data()),
              static_cast<std::streamsize>(f.field.size() * sizeof(double)));
  }
  if (!out) throw IoError("failed writing snapshot: " + path);
}

std::vector<NamedField> read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("snapshot not found: " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) throw IoError("not a snapshot file: " + path);
  const auto version = get<std::uint16_t>(in, path);
  if (version != kVersion)
    throw IoError("unsupported snapshot version " + std::to_string(version) + ": " + path);
  const int dim = get<std::uint8_t>(in, path);
  const auto n = get<std::uint32_t>(in, path);
  const double L = get<double>(in, path);
  const TorusGrid grid(dim, static_cast<int>(n), L);
  const auto count = get<std::uint16_t>(in, path);
  std::vector<NamedField> fields;
  for (std::uint16_t k = 0; k < count; ++k) {
    const auto len = get<std::uint8_t>(in, path);
    std::string name(len, '\0');
    in.read(name.data(), len);
    std::vector<double> values(grid.size());
    in.read(reinterpret_cast<char*>(values.data()),
            static_cast<std::streamsize>(values.size() * sizeof(double)));
    if (!in) throw IoError("truncated snapshot: " + path);
    fields.push_back({name, Field(grid, std::move(values))});
  }
  return fields;
}

std::vector<NamedField> state_fields(const State& state) {
  std::vector<NamedField> out{{"rho", state.rho}};
  const VecField u = recover_velocity(state.rho, state.momentum).u;
  for (int a = 0; a < u.dim(); ++a) out.push_back({"u" + std::to_string(a), u[a]});
  return out;
}

std::string format_csv_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string csv_row(const std::vector<double>& values) {
  std::string line;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) line += ',';
    line += format_csv_number(values[i]);
  }
  return line;
}

std::string csv_header_line() {
  std::string line;
  const auto header = csv_header();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) line += ',';
    line += header[i];
  }
  return line;
}

}  // namespace

DiagnosticsWriter::DiagnosticsWriter(const std::string& path)
    : file_(std::fopen(path.c_str(), "w")) {
  if (!file_) throw IoError("cannot open diagnostics file: " + path);
  std::fprintf(file_, "%s\n", csv_header_line().c_str());
  std::fflush(file_);
}

DiagnosticsWriter::~DiagnosticsWriter() {
  if (file_) std::fclose(file_);
}

void DiagnosticsWriter::write(const DiagnosticsRecord& record) {
  std::fprintf(file_, "%s\n", csv_row(csv_values(record)).c_str());
  std::fflush(file_);
}

std::string diagnostics_csv(const std::vector<DiagnosticsRecord>& records) {
  std::string out = csv_header_line() + "\n";
  for (const auto& r : records) out += csv_row(csv_values(r)) + "\n";
  return out;
}

std::vector<DiagnosticsRecord> read_diagnostics_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("diagnostics file not found: " + path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty diagnostics file: " + path);
  if (line != csv_header_line())
    throw ValidationError("diagnostics header does not match the expected columns: " + path);
  std::vector<DiagnosticsRecord> records;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::vector<double> values;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (cell.empty() || *end != '\0')
        throw ValidationError("line " + std::to_string(row) + ": malformed number '" + cell + "'");
      values.push_back(v);
    }
    try {
      records.push_back(record_from_values(values));
    } catch (const ValidationError& e) {
      throw ValidationError("line " + std::to_string(row) + ": " + e.what());
    }
  }
  return records;
}

void fill_budget_column(const std::string& path) {
  auto records = read_diagnostics_csv(path);
  if (records.size() >= 3) {
    const auto residual = energy_budget_residual(records);
    for (std::size_t i = 0; i < records.size(); ++i) records[i].energy_budget_residual = residual[i];
  }
  write_text_file(path, diagnostics_csv(records));
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write file: " + path);
  out << text;
  if (!out) throw IoError("failed writing file: " + path);
}

}  // namespace nlns

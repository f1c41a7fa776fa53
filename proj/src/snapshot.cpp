#include "calmedns/snapshot.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace calmedns {

namespace {

static_assert(std::endian::native == std::endian::little,
              "snapshot writer assumes a little-endian host");

template <class T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
bool get(std::istream& is, T& v) {
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  return static_cast<bool>(is);
}

}  // namespace

void write_snapshot(const std::string& path, const std::vector<const SpectralField*>& fields) {
  if (fields.empty()) throw std::invalid_argument("write_snapshot: no fields");
  if (fields.size() > 255) throw std::invalid_argument("write_snapshot: too many fields");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path);
  os.write("CNSF", 4);
  put<std::uint16_t>(os, kSnapshotVersion);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(fields[0]->grid().n()));
  put<std::uint8_t>(os, static_cast<std::uint8_t>(fields.size()));
  for (const auto* f : fields) {
    if (f->grid().n() != fields[0]->grid().n())
      throw std::invalid_argument("write_snapshot: mixed grids");
    for (int c = 0; c < 3; ++c) {
      const auto span = f->comp(c);
      os.write(reinterpret_cast<const char*>(span.data()),
               static_cast<std::streamsize>(span.size() * sizeof(cxd)));
    }
  }
  if (!os) throw std::runtime_error("write failed: " + path);
}

std::vector<SpectralField> read_snapshot(const std::string& path, GridPtr grid) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "CNSF", 4) != 0)
    throw std::runtime_error("snapshot: bad magic in " + path);
  std::uint16_t version = 0;
  std::uint32_t n = 0;
  std::uint8_t count = 0;
  if (!get(is, version) || version != kSnapshotVersion)
    throw std::runtime_error("snapshot: unsupported version in " + path);
  if (!get(is, n) || !get(is, count) || count == 0)
    throw std::runtime_error("snapshot: corrupt header in " + path);
  if (grid == nullptr) throw std::invalid_argument("read_snapshot: grid required");
  if (static_cast<int>(n) != grid->n())
    throw std::runtime_error("snapshot: stored n=" + std::to_string(n) +
                             " does not match grid n=" + std::to_string(grid->n()));
  std::vector<SpectralField> fields;
  for (int f = 0; f < count; ++f) {
    SpectralField field(grid);
    for (int c = 0; c < 3; ++c) {
      auto span = field.comp(c);
      is.read(reinterpret_cast<char*>(span.data()),
              static_cast<std::streamsize>(span.size() * sizeof(cxd)));
      if (!is) throw std::runtime_error("snapshot: truncated data in " + path);
    }
    fields.push_back(std::move(field));
  }
  return fields;
}

namespace {
std::string sidecar_path(const std::string& path) { return path + ".json"; }

std::string json_field(const std::string& body, const std::string& key) {
  const auto pos = body.find("\"" + key + "\"");
  if (pos == std::string::npos) throw std::runtime_error("checkpoint sidecar: missing " + key);
  auto colon = body.find(':', pos);
  auto end = body.find_first_of(",}", colon);
  std::string raw = body.substr(colon + 1, end - colon - 1);
  const auto b = raw.find_first_not_of(" \"\n\t");
  const auto e = raw.find_last_not_of(" \"\n\t");
  return raw.substr(b, e - b + 1);
}
}  // namespace

void write_checkpoint(const std::string& path, const SpectralField& state,
                      const Checkpoint& meta) {
  write_snapshot(path, {&state});
  std::ofstream os(sidecar_path(path), std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + sidecar_path(path));
  char tbuf[40];
  std::snprintf(tbuf, sizeof tbuf, "%.17g", meta.time);
  os << "{\"format\": \"CNSF\", \"version\": " << kSnapshotVersion << ", \"time\": " << tbuf
     << ", \"seed\": " << meta.seed << ", \"config_hash\": \"" << meta.config_hash << "\"}\n";
}

SpectralField read_checkpoint(const std::string& path, GridPtr grid,
                              const std::string& expected_hash, Checkpoint* meta_out) {
  std::ifstream is(sidecar_path(path));
  if (!is) throw std::runtime_error("checkpoint: missing sidecar " + sidecar_path(path));
  std::stringstream ss;
  ss << is.rdbuf();
  const std::string body = ss.str();
  Checkpoint meta;
  meta.time = std::stod(json_field(body, "time"));
  meta.seed = std::stoull(json_field(body, "seed"));
  meta.config_hash = json_field(body, "config_hash");
  if (json_field(body, "format") != "CNSF")
    throw std::runtime_error("checkpoint: bad format field");
  if (!expected_hash.empty() && meta.config_hash != expected_hash)
    throw std::runtime_error("checkpoint: config hash mismatch, refusing resume (stored " +
                             meta.config_hash + ", expected " + expected_hash + ")");
  auto fields = read_snapshot(path, grid);
  if (fields.size() != 1) throw std::runtime_error("checkpoint: expected exactly one field");
  if (meta_out) *meta_out = meta;
  return std::move(fields[0]);
}

}  // namespace calmedns

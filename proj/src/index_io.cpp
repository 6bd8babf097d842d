#include "wordspot/index_io.hpp"

#include <fstream>
#include <iterator>
#include <sstream>

#include "byte_io.hpp"
#include "wordspot/error.hpp"

namespace wordspot::io {

std::vector<std::uint8_t> serialize_index(const retrieval::Index& index) {
  detail::ByteWriter w;
  w.raw(kIndexMagic);
  w.u32(kIndexVersion);
  const std::vector<std::uint8_t> config = encode_config(index.config());
  w.u32(static_cast<std::uint32_t>(config.size()));
  for (std::uint8_t b : config) w.u8(b);
  w.u64(index.fingerprint());
  w.u32(static_cast<std::uint32_t>(index.dimension()));
  w.u64(index.size());
  for (const retrieval::Entry& e : index.entries()) {
    w.str(e.id);
    w.str(e.descriptor.label);
    w.str(e.page);
    w.i32(e.descriptor.width);
    for (double v : e.descriptor.values) w.f64(v);
  }
  w.u64(detail::fnv1a64(w.bytes()));
  return w.take();
}

retrieval::Index deserialize_index(std::string_view bytes) {
  if (bytes.size() < kIndexMagic.size() + 8 || bytes.substr(0, kIndexMagic.size()) != kIndexMagic) {
    throw FormatError("not a wordspot index file (bad magic)");
  }
  const std::uint32_t version = detail::ByteReader(bytes.substr(kIndexMagic.size(), 4)).u32();
  if (version != kIndexVersion) {
    throw FormatError("index file format version " + std::to_string(version) + " is not supported (expected " +
                      std::to_string(kIndexVersion) + ")");
  }
  {
    const std::string_view body = bytes.substr(0, bytes.size() - 8);
    detail::ByteReader tail(bytes.substr(bytes.size() - 8));
    if (detail::fnv1a64(body) != tail.u64()) throw FormatError("index file checksum mismatch (corrupt file)");
    bytes = body;
  }
  detail::ByteReader r(bytes);
  r.raw(kIndexMagic.size() + 4);
  const std::uint32_t config_len = r.u32();
  const std::string_view raw = r.raw(config_len);
  const DescriptorConfig config =
      decode_config(std::span(reinterpret_cast<const std::uint8_t*>(raw.data()), raw.size()));
  const std::uint64_t fingerprint = r.u64();
  if (fingerprint != config_fingerprint(config)) throw FormatError("index config fingerprint does not match its config block");
  const std::uint32_t dim = r.u32();
  if (dim != config.dimension()) throw FormatError("index dimension does not match its config");
  const std::uint64_t count = r.u64();
  // Every entry needs at least its fixed-size fields; reject absurd counts before reserving.
  if (count > r.remaining() / (16 + 8ull * dim)) throw FormatError("index entry count exceeds file size");

  std::vector<retrieval::Entry> entries;
  entries.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    retrieval::Entry e;
    e.id = r.str();
    e.descriptor.label = r.str();
    e.page = r.str();
    e.descriptor.width = r.i32();
    e.descriptor.values.resize(dim);
    for (double& v : e.descriptor.values) v = r.f64();
    entries.push_back(std::move(e));
  }
  if (!r.done()) throw FormatError("trailing bytes after index entries");
  try {
    return retrieval::Index(config, std::move(entries));
  } catch (const PreconditionError& e) {
    throw FormatError(std::string("index file holds invalid entries: ") + e.what());
  }
}

void save_index(const std::filesystem::path& path, const retrieval::Index& index) {
  const std::vector<std::uint8_t> bytes = serialize_index(index);
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write index file '" + path.string() + "'");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("failed writing index file '" + path.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error("cannot write index file '" + path.string() + "'");
  }
}

retrieval::Index load_index(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open index file '" + path.string() + "'");
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return deserialize_index(bytes);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

retrieval::Index load_index(const std::filesystem::path& path, const DescriptorConfig& expected) {
  retrieval::Index index = load_index(path);
  if (index.fingerprint() != config_fingerprint(expected)) {
    std::ostringstream os;
    os << path.string() << " was built with a different descriptor configuration\n  index:     "
       << describe_config(index.config()) << "\n  requested: " << describe_config(expected)
       << "\nrebuild the index or pass matching flags";
    throw ConfigMismatchError(os.str());
  }
  return index;
}

}  // namespace wordspot::io

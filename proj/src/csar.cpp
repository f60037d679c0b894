#include "toscadata/csar.hpp"

#include <zlib.h>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace toscadata {

namespace {

constexpr std::uint32_t kLocalSig = 0x04034b50;
constexpr std::uint32_t kCentralSig = 0x02014b50;
constexpr std::uint32_t kEndSig = 0x06054b50;
// 1980-01-01 00:00:00 in DOS format.
constexpr std::uint16_t kDosTime = 0;
constexpr std::uint16_t kDosDate = (0 << 9) | (1 << 5) | 1;

void put16(Bytes& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put32(Bytes& out, std::uint32_t v) {
  put16(out, static_cast<std::uint16_t>(v));
  put16(out, static_cast<std::uint16_t>(v >> 16));
}

std::uint32_t crc_of(const Bytes& data) {
  uLong crc = crc32(0L, Z_NULL, 0);
  if (!data.empty()) crc = crc32(crc, data.data(), static_cast<uInt>(data.size()));
  return static_cast<std::uint32_t>(crc);
}

class Cursor {
 public:
  Cursor(const Bytes& data, std::size_t pos) : data_(data), pos_(pos) {}

  std::uint16_t u16() {
    need(2);
    std::uint16_t v = data_[pos_] | (data_[pos_ + 1] << 8);
    pos_ += 2;
    return v;
  }
  std::uint32_t u32() {
    std::uint32_t lo = u16();
    std::uint32_t hi = u16();
    return lo | (hi << 16);
  }
  std::string text(std::size_t n) {
    need(n);
    std::string s(data_.begin() + pos_, data_.begin() + pos_ + n);
    pos_ += n;
    return s;
  }
  void skip(std::size_t n) {
    need(n);
    pos_ += n;
  }
  std::size_t pos() const { return pos_; }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > data_.size())
      throw Error(ErrorCode::InvalidArchive, "truncated zip archive");
  }
  const Bytes& data_;
  std::size_t pos_;
};

Bytes inflate_raw(const std::uint8_t* data, std::size_t size, std::size_t expected) {
  Bytes out(expected);
  z_stream zs{};
  if (inflateInit2(&zs, -MAX_WBITS) != Z_OK)
    throw Error(ErrorCode::InvalidArchive, "cannot initialise inflate");
  zs.next_in = const_cast<Bytef*>(data);
  zs.avail_in = static_cast<uInt>(size);
  zs.next_out = out.data();
  zs.avail_out = static_cast<uInt>(out.size());
  int rc = inflate(&zs, Z_FINISH);
  std::size_t produced = zs.total_out;
  inflateEnd(&zs);
  if (rc != Z_STREAM_END || produced != expected)
    throw Error(ErrorCode::InvalidArchive, "corrupt deflate stream");
  return out;
}

bool safe_path(const std::string& name) {
  if (name.empty() || name.front() == '/' || name.find('\\') != std::string::npos ||
      name.find(':') != std::string::npos)
    return false;
  std::istringstream parts(name);
  std::string part;
  while (std::getline(parts, part, '/'))
    if (part == "..") return false;
  return true;
}

std::map<std::string, std::string> parse_meta(const std::string& text) {
  std::map<std::string, std::string> meta;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto colon = line.find(':');
    if (colon == std::string::npos) continue;
    std::string key = line.substr(0, colon);
    std::string value = line.substr(colon + 1);
    auto trim = [](std::string& s) {
      s.erase(0, s.find_first_not_of(" \t"));
      s.erase(s.find_last_not_of(" \t") + 1);
    };
    trim(key);
    trim(value);
    meta[key] = value;
  }
  return meta;
}

std::string meta_text(const std::string& entry) {
  return "TOSCA-Meta-File-Version: 1.1\nCSAR-Version: 1.1\nEntry-Definitions: " +
         entry + "\n";
}

}  // namespace

bool looks_like_zip(std::string_view data) {
  return data.size() >= 4 && data[0] == 'P' && data[1] == 'K' && data[2] == 3 &&
         data[3] == 4;
}

Bytes pack_csar(const std::string& entry, const std::map<std::string, Bytes>& files) {
  if (!files.contains(entry))
    throw Error(ErrorCode::MissingEntryDefinitions,
                "entry definitions '" + entry + "' is not among the packed files");
  std::map<std::string, Bytes> all = files;
  std::string meta = meta_text(entry);
  all[kToscaMetaPath] = Bytes(meta.begin(), meta.end());

  Bytes out;
  Bytes central;
  for (const auto& [name, data] : all) {
    if (!safe_path(name))
      throw Error(ErrorCode::InvalidArchive, "unsafe archive path '" + name + "'");
    std::uint32_t offset = static_cast<std::uint32_t>(out.size());
    std::uint32_t crc = crc_of(data);
    auto size = static_cast<std::uint32_t>(data.size());
    auto name_len = static_cast<std::uint16_t>(name.size());

    put32(out, kLocalSig);
    put16(out, 20);
    put16(out, 0);
    put16(out, 0);
    put16(out, kDosTime);
    put16(out, kDosDate);
    put32(out, crc);
    put32(out, size);
    put32(out, size);
    put16(out, name_len);
    put16(out, 0);
    out.insert(out.end(), name.begin(), name.end());
    out.insert(out.end(), data.begin(), data.end());

    put32(central, kCentralSig);
    put16(central, 20);
    put16(central, 20);
    put16(central, 0);
    put16(central, 0);
    put16(central, kDosTime);
    put16(central, kDosDate);
    put32(central, crc);
    put32(central, size);
    put32(central, size);
    put16(central, name_len);
    put16(central, 0);
    put16(central, 0);
    put16(central, 0);
    put16(central, 0);
    put32(central, 0);
    put32(central, offset);
    central.insert(central.end(), name.begin(), name.end());
  }
  auto central_offset = static_cast<std::uint32_t>(out.size());
  out.insert(out.end(), central.begin(), central.end());
  put32(out, kEndSig);
  put16(out, 0);
  put16(out, 0);
  put16(out, static_cast<std::uint16_t>(all.size()));
  put16(out, static_cast<std::uint16_t>(all.size()));
  put32(out, static_cast<std::uint32_t>(central.size()));
  put32(out, central_offset);
  put16(out, 0);
  return out;
}

CsarArchive unpack_csar(const Bytes& archive) {
  if (archive.size() < 22 ||
      !looks_like_zip(std::string_view(reinterpret_cast<const char*>(archive.data()), 4)))
    throw Error(ErrorCode::InvalidArchive, "not a zip archive");

  std::size_t eocd = std::string::npos;
  std::size_t lowest = archive.size() > 22 + 65535 ? archive.size() - 22 - 65535 : 0;
  for (std::size_t i = archive.size() - 22 + 1; i-- > lowest;) {
    if (archive[i] == 0x50 && archive[i + 1] == 0x4b && archive[i + 2] == 5 &&
        archive[i + 3] == 6) {
      eocd = i;
      break;
    }
  }
  if (eocd == std::string::npos)
    throw Error(ErrorCode::InvalidArchive, "zip end-of-directory record not found");

  Cursor end(archive, eocd + 4);
  end.skip(4);
  end.u16();
  std::uint16_t count = end.u16();
  end.u32();
  std::uint32_t central_offset = end.u32();

  std::map<std::string, Bytes> files;
  Cursor cd(archive, central_offset);
  for (std::uint16_t i = 0; i < count; ++i) {
    if (cd.u32() != kCentralSig)
      throw Error(ErrorCode::InvalidArchive, "bad central directory entry");
    cd.skip(4);
    std::uint16_t flags = cd.u16();
    std::uint16_t method = cd.u16();
    cd.skip(4);
    std::uint32_t crc = cd.u32();
    std::uint32_t csize = cd.u32();
    std::uint32_t usize = cd.u32();
    std::uint16_t name_len = cd.u16();
    std::uint16_t extra_len = cd.u16();
    std::uint16_t comment_len = cd.u16();
    cd.skip(8);
    std::uint32_t local = cd.u32();
    std::string name = cd.text(name_len);
    cd.skip(extra_len + comment_len);

    if (flags & 1) throw Error(ErrorCode::InvalidArchive, "encrypted entry '" + name + "'");
    if (!name.empty() && name.back() == '/') continue;
    if (!safe_path(name))
      throw Error(ErrorCode::InvalidArchive, "unsafe archive path '" + name + "'");

    Cursor lh(archive, local);
    if (lh.u32() != kLocalSig)
      throw Error(ErrorCode::InvalidArchive, "bad local header for '" + name + "'");
    lh.skip(22);
    std::uint16_t lname = lh.u16();
    std::uint16_t lextra = lh.u16();
    lh.skip(lname + lextra);
    std::size_t start = lh.pos();
    lh.skip(csize);

    Bytes data;
    if (method == 0) {
      if (csize != usize)
        throw Error(ErrorCode::InvalidArchive, "size mismatch for '" + name + "'");
      data.assign(archive.begin() + start, archive.begin() + start + csize);
    } else if (method == 8) {
      data = inflate_raw(archive.data() + start, csize, usize);
    } else {
      throw Error(ErrorCode::InvalidArchive,
                  "unsupported compression method for '" + name + "'");
    }
    if (crc_of(data) != crc)
      throw Error(ErrorCode::InvalidArchive, "CRC mismatch for '" + name + "'");
    files[name] = std::move(data);
  }

  auto meta_it = files.find(kToscaMetaPath);
  if (meta_it == files.end())
    throw Error(ErrorCode::MissingMetadata, std::string("archive has no ") + kToscaMetaPath);
  CsarArchive out;
  out.metadata = parse_meta(std::string(meta_it->second.begin(), meta_it->second.end()));
  files.erase(meta_it);
  for (const char* key : {"TOSCA-Meta-File-Version", "CSAR-Version"})
    if (!out.metadata.contains(key))
      throw Error(ErrorCode::MissingMetadata,
                  std::string("TOSCA.meta lacks '") + key + "'");
  auto entry = out.metadata.find("Entry-Definitions");
  if (entry == out.metadata.end() || entry->second.empty())
    throw Error(ErrorCode::MissingEntryDefinitions, "TOSCA.meta lacks 'Entry-Definitions'");
  if (!files.contains(entry->second))
    throw Error(ErrorCode::MissingEntryDefinitions,
                "Entry-Definitions names absent file '" + entry->second + "'");
  out.entry_definitions = entry->second;
  out.files = std::move(files);
  return out;
}

std::map<std::string, Bytes> read_tree(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir))
    throw Error(ErrorCode::Io, "'" + dir.string() + "' is not a directory");
  std::map<std::string, Bytes> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read '" + e.path().string() + "'");
    Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    files[fs::relative(e.path(), dir).generic_string()] = std::move(data);
  }
  return files;
}

Bytes pack_directory(const std::filesystem::path& dir, std::string entry) {
  auto files = read_tree(dir);
  if (auto it = files.find(kToscaMetaPath); it != files.end()) {
    auto meta = parse_meta(std::string(it->second.begin(), it->second.end()));
    if (entry.empty() && meta.contains("Entry-Definitions"))
      entry = meta["Entry-Definitions"];
    files.erase(it);
  }
  if (entry.empty()) {
    std::vector<std::string> candidates;
    for (const auto& [name, _] : files) {
      bool top = name.find('/') == std::string::npos;
      bool yaml = name.ends_with(".yaml") || name.ends_with(".yml");
      if (top && yaml) candidates.push_back(name);
    }
    if (candidates.size() != 1)
      throw Error(ErrorCode::MissingEntryDefinitions,
                  "cannot choose an entry definitions file in '" + dir.string() +
                      "'; pass one explicitly");
    entry = candidates.front();
  }
  return pack_csar(entry, files);
}

void unpack_to_directory(const CsarArchive& archive, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  auto write = [&](const std::string& name, const Bytes& data) {
    fs::path p = dir / name;
    fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + p.string() + "'");
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size()));
  };
  fs::create_directories(dir);
  for (const auto& [name, data] : archive.files) write(name, data);
  std::string meta = meta_text(archive.entry_definitions);
  write(kToscaMetaPath, Bytes(meta.begin(), meta.end()));
}

}  // namespace toscadata

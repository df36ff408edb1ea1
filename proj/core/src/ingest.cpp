#include "annoaudit/ingest.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "annoaudit/error.hpp"

namespace annoaudit {

using nlohmann::json;

namespace {

constexpr std::array<char, 4> kMagic = {'A', 'E', 'M', 'B'};
constexpr std::uint16_t kBinaryVersion = 1;

std::string at_line(std::string_view source, std::size_t line) {
  return std::string(source) + ", line " + std::to_string(line) + ": ";
}

// nlohmann messages carry an exception id and a position relative to the
// single line being parsed; keep the column and the reason.
std::string json_reason(const json::parse_error& e) {
  std::string what = e.what();
  if (const auto col = what.find("column"); col != std::string::npos)
    if (const auto colon = what.find(": ", col); colon != std::string::npos) what = what.substr(colon + 2);
  return "invalid JSON at column " + std::to_string(e.byte) + " (" + what + ")";
}

std::ifstream open_in(const std::filesystem::path& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t\r\n") == std::string::npos;
}

const json& require_string(const json& obj, const char* key, std::string_view source, std::size_t line) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_string())
    throw ParseError(at_line(source, line) + "missing or non-string field '" + key + "'");
  return *it;
}

AnnotationRecord parse_record(const json& obj, const LabelMapping* mapping, std::string_view source,
                              std::size_t line) {
  if (!obj.is_object()) throw ParseError(at_line(source, line) + "expected a JSON object");
  AnnotationRecord rec;
  rec.line = line;
  rec.instance_id = require_string(obj, "instance_id", source, line).get<std::string>();
  rec.annotator_id = require_string(obj, "annotator_id", source, line).get<std::string>();
  const auto labels = obj.find("labels");
  if (labels == obj.end() || !labels->is_array() || labels->empty())
    throw ParseError(at_line(source, line) + "'labels' must be a non-empty array of strings");

  std::vector<std::string> raw;
  for (const json& l : *labels) {
    if (!l.is_string()) throw ParseError(at_line(source, line) + "'labels' must contain strings");
    std::string name = l.get<std::string>();
    for (const std::string& prev : raw)
      if (prev == name)
        throw SchemaError(at_line(source, line) + "label '" + name + "' repeated within one record");
    raw.push_back(std::move(name));
  }
  for (std::string& name : raw) {
    std::string mapped = mapping ? mapping->apply(name) : name;
    if (std::find(rec.labels.begin(), rec.labels.end(), mapped) == rec.labels.end())
      rec.labels.push_back(std::move(mapped));
  }
  if (const auto text = obj.find("text"); text != obj.end() && !text->is_null()) {
    if (!text->is_string()) throw ParseError(at_line(source, line) + "'text' must be a string");
    rec.text = text->get<std::string>();
  }
  return rec;
}

template <typename T>
void put_le(std::ostream& out, T value) {
  std::array<char, sizeof(T)> bytes{};
  for (std::size_t i = 0; i < sizeof(T); ++i)
    bytes[i] = static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xFF);
  out.write(bytes.data(), bytes.size());
}

template <typename T>
T get_le(std::istream& in, std::string_view source, const char* what) {
  std::array<unsigned char, sizeof(T)> bytes{};
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size()))
    throw ParseError(std::string(source) + ": truncated binary embeddings (" + what + ")");
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return static_cast<T>(v);
}

EmbeddingStore read_jsonl_embeddings(std::istream& in, std::string_view source) {
  EmbeddingStore store;
  bool first = true;
  std::string line;
  std::size_t lineno = 0;
  std::vector<float> buf;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(at_line(source, lineno) + json_reason(e));
    }
    if (!obj.is_object()) throw ParseError(at_line(source, lineno) + "expected a JSON object");
    const std::string id = require_string(obj, "instance_id", source, lineno).get<std::string>();
    const auto vec = obj.find("vector");
    if (vec == obj.end() || !vec->is_array() || vec->empty())
      throw ParseError(at_line(source, lineno) + "'vector' must be a non-empty array of numbers");
    buf.clear();
    for (const json& x : *vec) {
      if (!x.is_number()) throw ParseError(at_line(source, lineno) + "'vector' must contain numbers");
      buf.push_back(static_cast<float>(x.get<double>()));
    }
    if (first) {
      store = EmbeddingStore(buf.size());
      first = false;
    }
    try {
      store.add(id, buf);
    } catch (const SchemaError& e) {
      throw SchemaError(at_line(source, lineno) + e.what());
    }
  }
  return store;
}

EmbeddingStore read_binary_embeddings(std::istream& in, std::string_view source) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic)
    throw ParseError(std::string(source) + ": bad magic (expected AEMB)");
  const auto version = get_le<std::uint16_t>(in, source, "version");
  if (version != kBinaryVersion)
    throw ParseError(std::string(source) + ": unsupported version " + std::to_string(version));
  const auto dim = get_le<std::uint32_t>(in, source, "dim");
  const auto count = get_le<std::uint64_t>(in, source, "count");
  if (dim == 0) throw ParseError(std::string(source) + ": dim must be positive");

  EmbeddingStore store(dim);
  std::vector<float> buf(dim);
  std::string id;
  for (std::uint64_t r = 0; r < count; ++r) {
    const auto len = get_le<std::uint16_t>(in, source, "id length");
    id.assign(len, '\0');
    if (len > 0 && !in.read(id.data(), len))
      throw ParseError(std::string(source) + ": truncated binary embeddings (id)");
    for (std::uint32_t k = 0; k < dim; ++k) {
      const auto bits = get_le<std::uint32_t>(in, source, "vector");
      std::memcpy(&buf[k], &bits, sizeof(float));
    }
    try {
      store.add(id, buf);
    } catch (const SchemaError& e) {
      throw SchemaError(std::string(source) + ": row " + std::to_string(r) + ": " + e.what());
    }
  }
  if (in.peek() != std::char_traits<char>::eof())
    throw ParseError(std::string(source) + ": trailing bytes after " + std::to_string(count) + " rows");
  return store;
}

}  // namespace

LabelMapping::LabelMapping(std::map<std::string, std::string> renames) : renames_(std::move(renames)) {
  for (const auto& [from, to] : renames_) {
    if (from.empty() || to.empty()) throw SchemaError("label mapping: empty label name");
    const auto chained = renames_.find(to);
    if (chained != renames_.end() && chained->second != to)
      throw SchemaError("label mapping: '" + from + "' -> '" + to + "' is chained (target is itself renamed)");
  }
}

LabelMapping LabelMapping::from_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  json obj;
  try {
    obj = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  if (!obj.is_object()) throw ParseError(path.string() + ": label mapping must be a JSON object");
  std::map<std::string, std::string> renames;
  for (const auto& [from, to] : obj.items()) {
    if (!to.is_string()) throw ParseError(path.string() + ": mapping target for '" + from + "' must be a string");
    renames.emplace(from, to.get<std::string>());
  }
  return LabelMapping(std::move(renames));
}

std::string LabelMapping::apply(std::string_view label) const {
  const auto it = renames_.find(std::string(label));
  return it == renames_.end() ? std::string(label) : it->second;
}

Dataset parse_judgments(std::istream& in, const LabelMapping* mapping, std::string_view source) {
  std::optional<LabelSet> declared;
  std::vector<AnnotationRecord> records;
  std::string line;
  std::size_t lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(at_line(source, lineno) + json_reason(e));
    }
    if (first && obj.is_object() && obj.contains("label_set")) {
      const json& ls = obj["label_set"];
      if (!ls.is_array()) throw ParseError(at_line(source, lineno) + "'label_set' must be an array of strings");
      std::vector<std::string> names;
      for (const json& l : ls) {
        if (!l.is_string()) throw ParseError(at_line(source, lineno) + "'label_set' must contain strings");
        names.push_back(l.get<std::string>());
      }
      try {
        declared = LabelSet(std::move(names));
      } catch (const SchemaError& e) {
        throw SchemaError(at_line(source, lineno) + e.what());
      }
      first = false;
      continue;
    }
    first = false;
    records.push_back(parse_record(obj, mapping, source, lineno));
  }
  if (records.empty()) throw ParseError(std::string(source) + ": no judgments");
  try {
    return build_dataset(records, std::move(declared));
  } catch (const SchemaError& e) {
    throw SchemaError(std::string(source) + ": " + e.what());
  }
}

Dataset parse_judgment_file(const std::filesystem::path& path, const LabelMapping* mapping) {
  auto in = open_in(path);
  return parse_judgments(in, mapping, path.string());
}

void write_judgments(const Dataset& dataset, std::ostream& out) {
  out << json{{"label_set", dataset.label_set().names()}}.dump() << '\n';
  const auto judgments = dataset.judgments();
  std::vector<bool> written_text(dataset.instance_count(), false);
  std::vector<bool> done(judgments.size(), false);
  for (std::size_t i = 0; i < dataset.instance_count(); ++i) {
    const auto members = dataset.judgments_of(i);
    for (std::size_t m = 0; m < members.size(); ++m) {
      const std::size_t j = members[m];
      if (done[j]) continue;
      json rec;
      rec["instance_id"] = judgments[j].instance_id;
      rec["annotator_id"] = judgments[j].annotator_id;
      json labels = json::array();
      for (std::size_t n = m; n < members.size(); ++n) {
        const std::size_t k = members[n];
        if (!done[k] && judgments[k].annotator_id == judgments[j].annotator_id) {
          labels.push_back(judgments[k].label);
          done[k] = true;
        }
      }
      rec["labels"] = std::move(labels);
      const auto& text = dataset.instances()[i].text;
      if (text && !written_text[i]) {
        rec["text"] = *text;
        written_text[i] = true;
      }
      out << rec.dump() << '\n';
    }
  }
}

void write_judgment_file(const Dataset& dataset, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_judgments(dataset, out);
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

EmbeddingFormat parse_embedding_format(std::string_view name) {
  if (name == "jsonl") return EmbeddingFormat::Jsonl;
  if (name == "bin" || name == "binary") return EmbeddingFormat::Binary;
  throw ConfigError("unknown embedding format '" + std::string(name) + "' (expected jsonl or bin)");
}

EmbeddingFormat embedding_format_for(const std::filesystem::path& path) {
  return path.extension() == ".bin" ? EmbeddingFormat::Binary : EmbeddingFormat::Jsonl;
}

EmbeddingStore::EmbeddingStore(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw SchemaError("embedding dimension must be positive");
}

void EmbeddingStore::add(std::string id, std::span<const float> vector) {
  if (vector.size() != dim_)
    throw SchemaError("dimension mismatch for '" + id + "': got " + std::to_string(vector.size()) +
                      ", expected " + std::to_string(dim_));
  for (const float x : vector)
    if (!std::isfinite(x)) throw SchemaError("non-finite value in vector for '" + id + "'");
  if (!index_.emplace(id, ids_.size()).second) throw SchemaError("duplicate embedding id '" + id + "'");
  ids_.push_back(std::move(id));
  data_.insert(data_.end(), vector.begin(), vector.end());
}

std::optional<std::size_t> EmbeddingStore::find(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::span<const float>> EmbeddingStore::vector(std::string_view id) const {
  if (const auto r = find(id)) return row(*r);
  return std::nullopt;
}

EmbeddingStore read_embeddings(std::istream& in, EmbeddingFormat format, std::string_view source) {
  EmbeddingStore store = format == EmbeddingFormat::Binary ? read_binary_embeddings(in, source)
                                                           : read_jsonl_embeddings(in, source);
  if (store.empty()) throw ParseError(std::string(source) + ": no embeddings");
  return store;
}

EmbeddingStore parse_embeddings(const std::filesystem::path& path, EmbeddingFormat format) {
  auto in = open_in(path, format == EmbeddingFormat::Binary ? std::ios::in | std::ios::binary : std::ios::in);
  return read_embeddings(in, format, path.string());
}

EmbeddingStore parse_embeddings(const std::filesystem::path& path) {
  return parse_embeddings(path, embedding_format_for(path));
}

void write_embeddings(const EmbeddingStore& store, std::ostream& out, EmbeddingFormat format) {
  if (format == EmbeddingFormat::Binary) {
    out.write(kMagic.data(), kMagic.size());
    put_le<std::uint16_t>(out, kBinaryVersion);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(store.dim()));
    put_le<std::uint64_t>(out, store.size());
    for (std::size_t r = 0; r < store.size(); ++r) {
      const std::string& id = store.id(r);
      if (id.size() > 0xFFFF) throw ConfigError("embedding id longer than 65535 bytes: '" + id.substr(0, 32) + "...'");
      put_le<std::uint16_t>(out, static_cast<std::uint16_t>(id.size()));
      out.write(id.data(), static_cast<std::streamsize>(id.size()));
      for (const float x : store.row(r)) {
        std::uint32_t bits = 0;
        std::memcpy(&bits, &x, sizeof(float));
        put_le<std::uint32_t>(out, bits);
      }
    }
    return;
  }
  for (std::size_t r = 0; r < store.size(); ++r) {
    // float -> double is exact, and the shortest double repr parses back to the same float.
    json vec = json::array();
    for (const float x : store.row(r)) vec.push_back(static_cast<double>(x));
    out << json{{"instance_id", store.id(r)}, {"vector", std::move(vec)}}.dump() << '\n';
  }
}

void write_embeddings(const EmbeddingStore& store, const std::filesystem::path& path, EmbeddingFormat format) {
  auto out = open_out(path, format == EmbeddingFormat::Binary ? std::ios::out | std::ios::binary : std::ios::out);
  write_embeddings(store, out, format);
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

AlignmentReport validate_alignment(const Dataset& dataset, const EmbeddingStore& store) {
  AlignmentReport report;
  for (const Instance& inst : dataset.instances())
    if (!store.find(inst.id)) report.missing_embeddings.push_back(inst.id);
  for (const std::string& id : store.ids())
    if (!dataset.find_instance(id)) report.orphan_embeddings.push_back(id);
  return report;
}

}  // namespace annoaudit

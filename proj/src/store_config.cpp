#include <charconv>
#include <fstream>
#include <iterator>

#include <json.hpp>

#include "tstore/error.hpp"
#include "tstore/tuple_store.hpp"

namespace tstore {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::size_t parse_size(std::string_view key, std::string_view v) {
  std::size_t out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size()) {
    throw UsageError("config key '" + std::string(key) + "' needs a non-negative integer, got '" + std::string(v) + "'");
  }
  return out;
}

}  // namespace

std::string_view to_string(DictionaryKind k) {
  switch (k) {
    case DictionaryKind::none: return "none";
    case DictionaryKind::avl: return "avl";
    case DictionaryKind::prescilla: return "prescilla";
    case DictionaryKind::chopper: return "chopper";
    case DictionaryKind::block: return "block";
  }
  return "?";
}

std::string_view to_string(ContainerKind k) {
  switch (k) {
    case ContainerKind::static_vector: return "static";
    case ContainerKind::list: return "list";
    case ContainerKind::block: return "block";
  }
  return "?";
}

std::string_view to_string(CodecKind k) { return k == CodecKind::none ? "none" : "huffman"; }

DictionaryKind parse_dictionary_kind(std::string_view s) {
  for (auto k : {DictionaryKind::none, DictionaryKind::avl, DictionaryKind::prescilla, DictionaryKind::chopper,
                 DictionaryKind::block}) {
    if (s == to_string(k)) return k;
  }
  throw UsageError("unknown dictionary '" + std::string(s) + "' (none, avl, prescilla, chopper, block)");
}

ContainerKind parse_container_kind(std::string_view s) {
  if (s == "static-vector") return ContainerKind::static_vector;
  for (auto k : {ContainerKind::static_vector, ContainerKind::list, ContainerKind::block}) {
    if (s == to_string(k)) return k;
  }
  throw UsageError("unknown container '" + std::string(s) + "' (static, list, block)");
}

CodecKind parse_codec_kind(std::string_view s) {
  if (s == "none") return CodecKind::none;
  if (s == "huffman") return CodecKind::huffman;
  throw UsageError("unknown codec '" + std::string(s) + "' (none, huffman)");
}

ColumnMask StoreConfig::effective_mask() const {
  if (mask) return *mask;
  return ColumnMask::all(arity, dictionary != DictionaryKind::none);
}

std::string StoreConfig::id() const {
  return std::string(to_string(dictionary)) + "+" + std::string(to_string(container)) + "+" +
         std::string(to_string(codec));
}

void StoreConfig::validate() const {
  if (arity == 0) throw UsageError("arity must be positive");
  const ColumnMask m = effective_mask();
  if (m.size() != arity) {
    throw UsageError("column mask " + m.to_string() + " does not have arity " + std::to_string(arity));
  }
  if (dictionary == DictionaryKind::none && m.any_managed()) {
    throw UsageError("column mask manages columns but no dictionary is configured");
  }
  if (container == ContainerKind::static_vector && static_capacity == 0) {
    throw UsageError("static vector capacity must be positive");
  }
  if (dictionary == DictionaryKind::chopper && (chopper_slots == 0 || chopper_payload == 0)) {
    throw UsageError("chopper dictionary needs slot count and payload size");
  }
  if (!device_path.empty() && !needs_device()) {
    throw UsageError("a device is only used by block dictionaries or containers");
  }
}

void StoreConfig::set(std::string_view key, std::string_view value) {
  if (key == "arity") {
    arity = parse_size(key, value);
  } else if (key == "mask") {
    mask = ColumnMask::parse(value);
  } else if (key == "dictionary") {
    dictionary = parse_dictionary_kind(value);
  } else if (key == "container") {
    container = parse_container_kind(value);
  } else if (key == "codec") {
    codec = parse_codec_kind(value);
  } else if (key == "capacity" || key == "static_capacity") {
    static_capacity = parse_size(key, value);
  } else if (key == "chopper_slots") {
    chopper_slots = parse_size(key, value);
  } else if (key == "chopper_payload") {
    chopper_payload = parse_size(key, value);
  } else if (key == "max_inline") {
    max_inline = parse_size(key, value);
  } else if (key == "device") {
    device_path = std::string(value);
  } else if (key == "device_blocks") {
    const auto n = parse_size(key, value);
    if (n > BlockDevice::kMaxBlockCount) throw UsageError("device_blocks too large");
    device_blocks = static_cast<std::uint32_t>(n);
  } else if (key == "tree") {
    std::ifstream in{std::string(value), std::ios::binary};
    if (!in) throw IoError("cannot read tree file " + std::string(value));
    const std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    tree = std::make_shared<const HuffmanTree>(HuffmanTree::deserialize(bytes));
  } else {
    throw UsageError("unknown config key '" + std::string(key) + "'");
  }
}

StoreConfig StoreConfig::parse(std::string_view text) {
  StoreConfig cfg;
  const std::string_view body = trim(text);
  if (!body.empty() && body.front() == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
      throw UsageError(std::string("config JSON: ") + e.what());
    }
    if (!j.is_object()) throw UsageError("config JSON must be an object");
    for (const auto& [k, v] : j.items()) {
      if (v.is_string()) {
        cfg.set(k, v.get<std::string>());
      } else if (v.is_number_unsigned() || v.is_number_integer() || v.is_boolean()) {
        cfg.set(k, v.dump());
      } else {
        throw UsageError("config key '" + k + "' has an unsupported value type");
      }
    }
  } else {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto nl = text.find('\n', pos);
      std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
      pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
      ++line_no;
      if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) {
        throw UsageError("config line " + std::to_string(line_no) + ": expected key = value");
      }
      std::string_view v = trim(line.substr(eq + 1));
      if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
      cfg.set(trim(line.substr(0, eq)), v);
    }
  }
  cfg.validate();
  return cfg;
}

}  // namespace tstore

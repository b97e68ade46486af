#include <array>
#include <cstdio>
#include <string>

#include "tstore/error.hpp"
#include "tstore/random.hpp"
#include "tstore/rdf_io.hpp"

namespace tstore {

namespace {

constexpr std::array<const char*, 24> kSyllables = {"ka", "lo", "mi", "ne", "ra", "sto", "ven", "bur", "tal", "qui",
                                                    "de", "fen", "gri", "har", "jo", "mar", "pel", "sun", "tro",
                                                    "wik", "zan", "ox", "ber", "ly"};

std::string word(Rng& rng, int min_syl, int max_syl, bool capital = false) {
  std::string w;
  const auto n = rng.between(static_cast<std::uint64_t>(min_syl), static_cast<std::uint64_t>(max_syl));
  for (std::uint64_t i = 0; i < n; ++i) w += rng.pick(kSyllables);
  if (capital) w[0] = static_cast<char>(w[0] - 'a' + 'A');
  return w;
}

std::string number(std::uint64_t v, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%0*llu", width, static_cast<unsigned long long>(v));
  return buf;
}

std::string xsd(std::string_view type) { return "<http://www.w3.org/2001/XMLSchema#" + std::string(type) + ">"; }

// --- BTC-like: many hosts and vocabularies, few repeats --------------------------------

constexpr std::array<const char*, 28> kVocabulary = {
    "<http://xmlns.com/foaf/0.1/name>",
    "<http://xmlns.com/foaf/0.1/knows>",
    "<http://xmlns.com/foaf/0.1/homepage>",
    "<http://xmlns.com/foaf/0.1/nick>",
    "<http://xmlns.com/foaf/0.1/based_near>",
    "<http://purl.org/dc/elements/1.1/title>",
    "<http://purl.org/dc/elements/1.1/creator>",
    "<http://purl.org/dc/terms/created>",
    "<http://purl.org/dc/terms/subject>",
    "<http://www.w3.org/2000/01/rdf-schema#label>",
    "<http://www.w3.org/2000/01/rdf-schema#comment>",
    "<http://www.w3.org/2000/01/rdf-schema#seeAlso>",
    "<http://www.w3.org/1999/02/22-rdf-syntax-ns#type>",
    "<http://www.w3.org/2002/07/owl#sameAs>",
    "<http://www.w3.org/2004/02/skos/core#prefLabel>",
    "<http://www.w3.org/2004/02/skos/core#broader>",
    "<http://www.w3.org/2003/01/geo/wgs84_pos#lat>",
    "<http://www.w3.org/2003/01/geo/wgs84_pos#long>",
    "<http://dbpedia.org/ontology/birthPlace>",
    "<http://dbpedia.org/ontology/populationTotal>",
    "<http://dbpedia.org/property/wikiPageUsesTemplate>",
    "<http://rdfs.org/sioc/ns#has_creator>",
    "<http://rdfs.org/sioc/ns#topic>",
    "<http://purl.org/ontology/mo/performer>",
    "<http://usefulinc.com/ns/doap#maintainer>",
    "<http://www.geonames.org/ontology#parentFeature>",
    "<http://data.semanticweb.org/ns/swc/ontology#isRoleAt>",
    "<http://swrc.ontoware.org/ontology#affiliation>"};

constexpr std::array<const char*, 10> kTlds = {"org", "com", "net", "de", "info", "edu", "fr", "co.uk", "jp", "eu"};
constexpr std::array<const char*, 8> kHostPrefixes = {"", "www.", "data.", "dbpedia.", "id.", "rdf.", "sw.", "lod."};
constexpr std::array<const char*, 8> kPaths = {"resource", "id", "people", "page", "data", "item", "doc", "~"};
constexpr std::array<const char*, 4> kLangs = {"en", "de", "fr", "es"};

std::string random_uri(Rng& rng) {
  std::string u = "<http://";
  u += rng.pick(kHostPrefixes);
  u += word(rng, 2, 3);
  u += '.';
  u += rng.pick(kTlds);
  u += '/';
  u += rng.pick(kPaths);
  u += '/';
  if (rng.chance(1, 2)) {
    u += word(rng, 1, 3, true) + "_" + word(rng, 1, 3, true);
  } else {
    u += word(rng, 1, 2) + number(rng.below(100000), 1);
  }
  return u + ">";
}

std::string btc_object(Rng& rng) {
  const auto r = rng.below(100);
  if (r < 40) return random_uri(rng);
  if (r < 80) {
    std::string lit = "\"" + word(rng, 1, 3, true);
    const auto words = rng.below(4);
    for (std::uint64_t i = 0; i < words; ++i) lit += " " + word(rng, 1, 3);
    lit += "\"";
    if (rng.chance(1, 2)) lit += std::string("@") + rng.pick(kLangs);
    return lit;
  }
  if (r < 90) {
    return "\"" + number(1900 + rng.below(120), 4) + "-" + number(1 + rng.below(12), 2) + "-" +
           number(1 + rng.below(28), 2) + "\"^^" + xsd("date");
  }
  if (r < 95) return "\"" + number(rng.below(10000000), 1) + "\"^^" + xsd("integer");
  return "_:b" + number(rng.below(1000000000), 9);
}

std::vector<Triple> generate_btc(std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Triple> out;
  out.reserve(count);
  std::string subject;
  std::uint64_t uses = 0;
  while (out.size() < count) {
    if (uses == 0) {
      subject = rng.chance(1, 10) ? "_:n" + number(rng.below(1000000000), 9) : random_uri(rng);
      uses = rng.between(1, 3);
    }
    --uses;
    std::string predicate;
    if (rng.chance(3, 10)) {
      predicate = "<http://" + word(rng, 2, 3) + "." + rng.pick(kTlds) + "/ontology/" + word(rng, 1, 3) + ">";
    } else {
      predicate = rng.pick(kVocabulary);
    }
    out.push_back(Triple{Element(subject), Element(std::move(predicate)), Element(btc_object(rng))});
  }
  return out;
}

// --- SSP-like: sensor descriptions and observations under one service prefix -----------

constexpr const char* kService = "http://ssp.spitfire-project.eu/";

struct SensorType {
  const char* name;
  const char* unit;
  const char* range;
  const char* method;
  int lo;
  int hi;
};

constexpr std::array<SensorType, 6> kSensorTypes = {{
    {"temperature", "celsius", "-40..125", "thermistor", -10, 40},
    {"humidity", "percent", "0..100", "capacitive", 10, 95},
    {"light", "lux", "0..100000", "photodiode", 0, 2000},
    {"pressure", "hectopascal", "300..1100", "piezoresistive", 950, 1050},
    {"co2", "ppm", "0..5000", "infrared", 350, 2000},
    {"noise", "decibel", "30..130", "microphone", 30, 90},
}};

std::string ssp(std::string_view path) { return "<" + std::string(kService) + std::string(path) + ">"; }

std::vector<Triple> generate_ssp(std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Triple> out;
  out.reserve(count);
  const std::size_t sensors = std::max<std::size_t>(2, count / 25);
  struct Sensor {
    std::string uri;
    std::string node;
    const SensorType* type;
  };
  std::vector<Sensor> list;
  for (std::size_t i = 0; i < sensors; ++i) {
    const auto& type = kSensorTypes[i % kSensorTypes.size()];
    const std::string node = "node" + number(i / kSensorTypes.size() + 1, 3);
    list.push_back({ssp("sensors/" + node + "/" + type.name), node, &type});
  }
  const auto emit = [&](std::string s, std::string p, std::string o) {
    if (out.size() < count) out.push_back(Triple{Element(std::move(s)), Element(std::move(p)), Element(std::move(o))});
  };
  for (const auto& s : list) {
    const auto building = 1 + rng.below(4);
    const auto floor = rng.below(5);
    emit(s.uri, "<http://www.w3.org/1999/02/22-rdf-syntax-ns#type>", ssp("ontology#Sensor"));
    emit(s.uri, ssp("ontology#observes"), ssp(std::string("properties/") + s.type->name));
    emit(s.uri, ssp("ontology#hasUnit"), ssp(std::string("units/") + s.type->unit));
    emit(s.uri, ssp("ontology#locatedIn"),
         ssp("locations/building" + number(building, 1) + "/floor" + number(floor, 1) + "/room" +
             number(building * 100 + floor * 10 + rng.below(10), 3)));
    emit(s.uri, ssp("ontology#valueRange"), std::string("\"") + s.type->range + "\"");
    emit(s.uri, ssp("ontology#measurementMethod"), ssp(std::string("methods/") + s.type->method));
  }
  // Observations advance a shared clock starting 2012-04-16 00:00:00.
  std::uint64_t clock = 0;
  while (out.size() < count) {
    const auto& s = list[rng.below(list.size())];
    clock += rng.between(1, 30);
    const auto day = 16 + clock / 86400 % 14;
    const auto hh = clock / 3600 % 24, mm = clock / 60 % 60, ss = clock % 60;
    const std::string stamp = "2012-04-" + number(day, 2) + "T" + number(hh, 2) + ":" + number(mm, 2) + ":" +
                              number(ss, 2) + "Z";
    const std::string obs = ssp("observations/" + s.node + "/" + s.type->name + "/2012-04-" + number(day, 2) + "T" +
                                number(hh, 2) + number(mm, 2) + number(ss, 2));
    const auto raw = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(s.type->hi - s.type->lo) * 2 + 1));
    const std::int64_t halves = 2 * s.type->lo + raw;
    const std::int64_t mag = halves < 0 ? -halves : halves;
    const std::string value = (halves < 0 ? "-" : "") + std::to_string(mag / 2) + (mag % 2 ? ".5" : ".0");
    emit(obs, ssp("ontology#observedBy"), s.uri);
    emit(obs, ssp("ontology#hasValue"), "\"" + value + "\"^^" + xsd("double"));
    emit(obs, ssp("ontology#sampledAt"), "\"" + stamp + "\"^^" + xsd("dateTime"));
  }
  return out;
}

}  // namespace

CorpusKind parse_corpus_kind(std::string_view s) {
  if (s == "btc") return CorpusKind::btc;
  if (s == "ssp") return CorpusKind::ssp;
  throw UsageError("unknown corpus kind '" + std::string(s) + "' (btc, ssp)");
}

std::vector<Triple> generate_corpus(CorpusKind kind, std::size_t triples, std::uint64_t seed) {
  return kind == CorpusKind::btc ? generate_btc(triples, seed) : generate_ssp(triples, seed);
}

}  // namespace tstore

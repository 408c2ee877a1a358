#include "auhead/au_core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "auhead/embedded_data.hpp"
#include "json.hpp"

namespace auhead {

namespace {

std::string describe(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

[[noreturn]] void value_out_of_range(std::size_t index, double value) {
  Error err(ErrorKind::ValueOutOfRange,
            "AU " + std::to_string(index) + " has intensity " + describe(value) + " outside [0, 1]");
  err.index = static_cast<long long>(index);
  err.value = value;
  throw err;
}

}  // namespace

AuVector::AuVector(const Storage& values) : values_(values) {
  for (std::size_t i = 0; i < kNumAus; ++i) {
    const double v = values_[i];
    if (!(v >= 0.0 && v <= 1.0)) value_out_of_range(i, v);
  }
}

bool AuVector::is_neutral() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

AuVector validate_dense(std::span<const double> values) {
  if (values.size() != kNumAus) {
    Error err(ErrorKind::BadLength,
              "expected " + std::to_string(kNumAus) + " values, got " + std::to_string(values.size()));
    err.value = static_cast<double>(values.size());
    throw err;
  }
  AuVector::Storage storage{};
  std::copy(values.begin(), values.end(), storage.begin());
  return AuVector(storage);
}

SparseAuFrame::SparseAuFrame(std::vector<AuPair> pairs) : pairs_(std::move(pairs)) {
  int previous = -1;
  for (const auto& p : pairs_) {
    if (p.index < 0 || p.index >= static_cast<int>(kNumAus)) {
      Error err(ErrorKind::BadIndex, "AU index " + std::to_string(p.index) + " outside 0..23");
      err.index = p.index;
      throw err;
    }
    if (p.index <= previous) {
      Error err(ErrorKind::ParseError,
                "AU indices must be strictly increasing (" + std::to_string(previous) + " then " +
                    std::to_string(p.index) + ")");
      err.index = p.index;
      throw err;
    }
    if (!(p.intensity >= 0.0 && p.intensity <= 1.0)) {
      Error err(ErrorKind::BadIntensity,
                "AU " + std::to_string(p.index) + " intensity " + describe(p.intensity) + " outside [0, 1]");
      err.index = p.index;
      err.value = p.intensity;
      throw err;
    }
    previous = p.index;
  }
}

std::string_view to_string(Representation r) noexcept {
  return r == Representation::Dense ? "dense" : "sparse";
}

Representation representation_of(const AuSequence& seq) noexcept {
  return std::holds_alternative<DenseSequence>(seq) ? Representation::Dense : Representation::Sparse;
}

std::string_view to_string(FaceRegion r) noexcept {
  switch (r) {
    case FaceRegion::Eyes: return "eyes";
    case FaceRegion::Brows: return "brows";
    case FaceRegion::Jaw: return "jaw";
    case FaceRegion::Lips: return "lips";
    case FaceRegion::Cheeks: return "cheeks";
    case FaceRegion::Nose: return "nose";
    case FaceRegion::Chin: return "chin";
  }
  return "eyes";
}

FaceRegion parse_region(std::string_view text) {
  static constexpr FaceRegion all[] = {FaceRegion::Eyes,   FaceRegion::Brows, FaceRegion::Jaw, FaceRegion::Lips,
                                       FaceRegion::Cheeks, FaceRegion::Nose,  FaceRegion::Chin};
  const std::string lowered = to_lower_ascii(text);
  for (FaceRegion r : all) {
    if (to_string(r) == lowered) return r;
  }
  fail(ErrorKind::SchemaError, "unknown facial region '" + std::string(text) + "'");
}

AuTaxonomy AuTaxonomy::from_json(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::SchemaError, std::string("taxonomy is not valid JSON: ") + e.what());
  }
  if (!doc.is_array() || doc.size() != kNumAus) {
    fail(ErrorKind::SchemaError, "taxonomy must be a list of exactly 24 descriptors");
  }

  AuTaxonomy taxonomy;
  taxonomy.descriptors_.resize(kNumAus);
  std::vector<bool> seen(kNumAus, false);
  try {
    for (const auto& entry : doc) {
      const int index = entry.at("index").get<int>();
      if (index < 0 || index >= static_cast<int>(kNumAus) || seen[index]) {
        fail(ErrorKind::SchemaError, "taxonomy index " + std::to_string(index) + " is invalid or repeated");
      }
      seen[index] = true;
      AuDescriptor& d = taxonomy.descriptors_[index];
      d.index = index;
      d.name = entry.at("name").get<std::string>();
      d.region = parse_region(entry.at("region").get<std::string>());
      d.alias = entry.value("alias", std::string{});
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::SchemaError, std::string("malformed taxonomy entry: ") + e.what());
  }

  for (std::size_t i = 0; i < kNumAus; ++i) {
    for (std::size_t j = i + 1; j < kNumAus; ++j) {
      if (taxonomy.descriptors_[i].name == taxonomy.descriptors_[j].name) {
        fail(ErrorKind::SchemaError, "duplicate AU name '" + taxonomy.descriptors_[i].name + "'");
      }
    }
  }
  return taxonomy;
}

const AuTaxonomy& AuTaxonomy::builtin() {
  static const AuTaxonomy taxonomy = from_json(embedded::au_taxonomy);
  return taxonomy;
}

const AuDescriptor& AuTaxonomy::at(int index) const {
  if (index < 0 || index >= static_cast<int>(descriptors_.size())) {
    Error err(ErrorKind::IndexOutOfRange, "AU index " + std::to_string(index) + " outside 0..23");
    err.index = index;
    throw err;
  }
  return descriptors_[static_cast<std::size_t>(index)];
}

const AuDescriptor& au_metadata(int index) { return AuTaxonomy::builtin().at(index); }

std::string to_lower_ascii(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

EmotionTaxonomy::EmotionTaxonomy(std::vector<Category> categories) : categories_(std::move(categories)) {
  if (categories_.empty()) fail(ErrorKind::InvalidArgument, "emotion taxonomy is empty");
  for (auto& c : categories_) {
    c.label = to_lower_ascii(c.label);
    if (c.label.empty()) fail(ErrorKind::InvalidArgument, "emotion label is empty");
    for (auto& s : c.spellings) s = to_lower_ascii(s);
    if (std::find(c.spellings.begin(), c.spellings.end(), c.label) == c.spellings.end()) {
      c.spellings.insert(c.spellings.begin(), c.label);
    }
  }
}

const EmotionTaxonomy& EmotionTaxonomy::mead8() {
  static const EmotionTaxonomy taxonomy({
      {"angry", {"angry", "anger"}},
      {"contempt", {"contempt"}},
      {"disgusted", {"disgusted", "disgust"}},
      {"fear", {"fear", "fearful"}},
      {"happy", {"happy", "happiness"}},
      {"neutral", {"neutral"}},
      {"sad", {"sad", "sadness"}},
      {"surprised", {"surprised", "surprise"}},
  });
  return taxonomy;
}

const EmotionTaxonomy& EmotionTaxonomy::crema6() {
  static const EmotionTaxonomy taxonomy({
      {"angry", {"angry", "anger"}},
      {"disgusted", {"disgusted", "disgust"}},
      {"fear", {"fear", "fearful"}},
      {"happy", {"happy", "happiness"}},
      {"neutral", {"neutral"}},
      {"sad", {"sad", "sadness"}},
  });
  return taxonomy;
}

EmotionTaxonomy EmotionTaxonomy::from_json(std::string_view json_text) {
  std::vector<Category> categories;
  try {
    const auto doc = nlohmann::json::parse(json_text);
    if (!doc.is_array()) fail(ErrorKind::SchemaError, "emotion taxonomy must be a JSON list");
    for (const auto& entry : doc) {
      if (entry.is_string()) {
        categories.push_back({entry.get<std::string>(), {}});
      } else {
        categories.push_back({entry.at("label").get<std::string>(),
                              entry.value("spellings", std::vector<std::string>{})});
      }
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::SchemaError, std::string("malformed emotion taxonomy: ") + e.what());
  }
  return EmotionTaxonomy(std::move(categories));
}

EmotionLabel EmotionTaxonomy::resolve(std::string_view text) const {
  const std::string lowered = to_lower_ascii(text);
  for (const auto& c : categories_) {
    for (const auto& s : c.spellings) {
      if (s == lowered) return EmotionLabel{lowered, c.label};
    }
  }
  fail(ErrorKind::UnknownEmotion, "'" + std::string(text) + "' is not in the emotion taxonomy");
}

bool EmotionTaxonomy::contains(std::string_view text) const noexcept {
  const std::string lowered = to_lower_ascii(text);
  for (const auto& c : categories_) {
    if (std::find(c.spellings.begin(), c.spellings.end(), lowered) != c.spellings.end()) return true;
  }
  return false;
}

}  // namespace auhead

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "auhead/au_core.hpp"
#include "auhead/error.hpp"

using namespace auhead;

namespace {

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no auhead::Error thrown";
  return ErrorKind::IoError;
}

}  // namespace

TEST(AuVector, RejectsOutOfRangeWithIndexAndValue) {
  AuVector::Storage v{};
  v[7] = 1.2;
  try {
    AuVector bad(v);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ValueOutOfRange);
    EXPECT_EQ(e.index, 7);
    EXPECT_DOUBLE_EQ(*e.value, 1.2);
  }
  v[7] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_EQ(kind_of([&] { AuVector{v}; }), ErrorKind::ValueOutOfRange);
  v[7] = -0.01;
  EXPECT_EQ(kind_of([&] { AuVector{v}; }), ErrorKind::ValueOutOfRange);
}

TEST(AuVector, BoundsAreInclusive) {
  AuVector::Storage v{};
  v[0] = 0.0;
  v[23] = 1.0;
  EXPECT_NO_THROW(AuVector{v});
  EXPECT_TRUE(AuVector().is_neutral());
  EXPECT_FALSE(AuVector(v).is_neutral());
}

TEST(AuVector, ValidateDenseChecksLength) {
  std::vector<double> v(23, 0.0);
  EXPECT_EQ(kind_of([&] { validate_dense(v); }), ErrorKind::BadLength);
  v.resize(25);
  EXPECT_EQ(kind_of([&] { validate_dense(v); }), ErrorKind::BadLength);
  v.resize(24);
  v[3] = 0.5;
  EXPECT_EQ(validate_dense(v)[3], 0.5);
}

TEST(SparseAuFrame, Validation) {
  EXPECT_NO_THROW(SparseAuFrame({{0, 0.1}, {5, 1.0}, {23, 0.0}}));
  EXPECT_EQ(kind_of([] { SparseAuFrame({{24, 0.1}}); }), ErrorKind::BadIndex);
  EXPECT_EQ(kind_of([] { SparseAuFrame({{-1, 0.1}}); }), ErrorKind::BadIndex);
  EXPECT_EQ(kind_of([] { SparseAuFrame({{2, 1.5}}); }), ErrorKind::BadIntensity);
  EXPECT_EQ(kind_of([] { SparseAuFrame({{3, 0.1}, {2, 0.1}}); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { SparseAuFrame({{3, 0.1}, {3, 0.2}}); }), ErrorKind::ParseError);
}

TEST(Sequence, FpsMustBePositiveAndFinite) {
  EXPECT_EQ(kind_of([] { DenseSequence(0.0, {}); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { DenseSequence(-5.0, {}); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { DenseSequence(std::nan(""), {}); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { SparseSequence(INFINITY, {}); }), ErrorKind::InvalidArgument);
  const AuSequence s = SparseSequence(5.0, {SparseAuFrame{}});
  EXPECT_EQ(representation_of(s), Representation::Sparse);
}

TEST(Taxonomy, BuiltinHas24OrderedDescriptors) {
  const auto& tax = AuTaxonomy::builtin();
  ASSERT_EQ(tax.descriptors().size(), 24u);
  for (int i = 0; i < 24; ++i) EXPECT_EQ(tax.at(i).index, i);
  EXPECT_EQ(au_metadata(0).name, "left eye closure");
  EXPECT_EQ(au_metadata(8).name, "jaw-driven mouth opening");
  EXPECT_EQ(au_metadata(8).region, FaceRegion::Jaw);
  EXPECT_EQ(au_metadata(8).alias, "AU9: Jaw Drop");
  EXPECT_EQ(au_metadata(23).name, "nose wrinkle");
  EXPECT_EQ(au_metadata(23).region, FaceRegion::Nose);
  EXPECT_EQ(au_metadata(22).region, FaceRegion::Cheeks);
  EXPECT_EQ(au_metadata(20).region, FaceRegion::Chin);
}

TEST(Taxonomy, LookupErrors) {
  EXPECT_EQ(kind_of([] { au_metadata(24); }), ErrorKind::IndexOutOfRange);
  EXPECT_EQ(kind_of([] { au_metadata(-1); }), ErrorKind::IndexOutOfRange);
  EXPECT_EQ(kind_of([] { AuTaxonomy::from_json("[{\"index\": 0}]"); }), ErrorKind::SchemaError);
  EXPECT_EQ(kind_of([] { AuTaxonomy::from_json("not json"); }), ErrorKind::SchemaError);
}

TEST(Taxonomy, RegionParsing) {
  for (auto r : {FaceRegion::Eyes, FaceRegion::Brows, FaceRegion::Jaw, FaceRegion::Lips, FaceRegion::Cheeks,
                 FaceRegion::Nose, FaceRegion::Chin}) {
    EXPECT_EQ(parse_region(to_string(r)), r);
  }
  EXPECT_EQ(parse_region("LIPS"), FaceRegion::Lips);
  EXPECT_EQ(kind_of([] { parse_region("ears"); }), ErrorKind::SchemaError);
}

TEST(Emotions, Mead8AcceptsAlternateSpellings) {
  const auto& mead = EmotionTaxonomy::mead8();
  EXPECT_EQ(mead.categories().size(), 8u);
  const EmotionLabel s = mead.resolve("Surprise");
  EXPECT_EQ(s.text, "surprise");
  EXPECT_EQ(s.canonical, "surprised");
  EXPECT_EQ(mead.resolve("happy").canonical, "happy");
  EXPECT_TRUE(mead.contains("ANGRY"));
  EXPECT_FALSE(mead.contains("bored"));
  EXPECT_EQ(kind_of([&] { mead.resolve("bored"); }), ErrorKind::UnknownEmotion);
}

TEST(Emotions, Crema6AndJson) {
  EXPECT_EQ(EmotionTaxonomy::crema6().categories().size(), 6u);
  EXPECT_FALSE(EmotionTaxonomy::crema6().contains("contempt"));
  const auto t = EmotionTaxonomy::from_json(R"(["calm", {"label": "joy", "spellings": ["joyful"]}])");
  EXPECT_EQ(t.resolve("joyful").canonical, "joy");
  EXPECT_TRUE(t.contains("calm"));
}

TEST(Errors, MessageCarriesKind) {
  try {
    fail(ErrorKind::CorruptFile, "bad magic");
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "CorruptFile: bad magic");
  }
}

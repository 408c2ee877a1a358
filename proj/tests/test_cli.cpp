#include <gtest/gtest.h>

#include <cstring>
#include <random>

#include "auhead/codec.hpp"
#include "auhead/io.hpp"
#include "json.hpp"
#include "support/oracles.hpp"
#include "support/run.hpp"

using namespace auhead;

namespace {

std::string footnote_json() {
  AuVector::Storage v{};
  v[0] = 0.38;
  v[1] = 0.45;
  v[21] = 0.84;
  v[22] = 0.90;
  return io::sequence_to_json(DenseSequence(25.0, {AuVector(v)}));
}

std::string f32_file(float v) {
  const auto b = io::f32_to_bytes(std::vector<float>{v});
  return std::string(b.begin(), b.end());
}

std::vector<float> read_f32(const cli::Workspace& ws, const std::string& name) {
  const std::string s = ws.read(name);
  return io::f32_from_bytes(std::vector<std::uint8_t>(s.begin(), s.end()));
}

}  // namespace

TEST(Cli, EncodeFootnoteTokens) {
  cli::Workspace ws("auhead_cli_encode");
  ws.write("in.ausq.json", footnote_json());
  const auto r = ws.run({"encode", "--lambda", "0", ws.path("in.ausq.json"), "--tokens", "--emotion", "surprise"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "surprise, [[[0, .38], [1, .45], [21, .84], [22, .90]]]\n");
}

TEST(Cli, EncodeDecodeReproducesQuantizedInput) {
  cli::Workspace ws("auhead_cli_roundtrip");
  std::mt19937_64 rng(1);
  const AuSequence seq = oracle::random_quantized_sequence(rng, 40, 25.0);
  io::write_sequence(seq, ws.path("in.json"));
  io::write_sequence(seq, ws.path("in.ausq"));

  ASSERT_EQ(ws.run({"encode", ws.path("in.json"), "-o", ws.path("sparse.json")}).code, 0);
  ASSERT_EQ(ws.run({"decode", ws.path("sparse.json"), "-o", ws.path("out.json")}).code, 0);
  EXPECT_EQ(ws.read("out.json"), ws.read("in.json"));

  ASSERT_EQ(ws.run({"encode", ws.path("in.json"), "--tokens", "--emotion", "happy", "-o", ws.path("t.txt")}).code, 0);
  ASSERT_EQ(ws.run({"decode", ws.path("t.txt"), "--fps", "25", "-o", ws.path("back.ausq")}).code, 0);
  EXPECT_EQ(ws.read("back.ausq"), ws.read("in.ausq"));
}

TEST(Cli, EncodeStats) {
  cli::Workspace ws("auhead_cli_stats");
  ws.write("in.json", footnote_json());
  ASSERT_EQ(ws.run({"encode", ws.path("in.json"), "--stats", ws.path("s.json"), "-o", ws.path("o.json")}).code, 0);
  const auto stats = nlohmann::json::parse(ws.read("s.json"));
  EXPECT_EQ(stats["dense_chars"].get<std::size_t>(), oracle::dense_chars(1));
  EXPECT_EQ(stats["sparse_chars"].get<std::size_t>(), oracle::sparse_chars({{0, 1, 21, 22}}));
}

TEST(Cli, ResampleGammaAndFactor) {
  cli::Workspace ws("auhead_cli_resample");
  std::mt19937_64 rng(2);
  io::write_sequence(oracle::random_quantized_sequence(rng, 100, 25.0), ws.path("in.json"));
  ASSERT_EQ(ws.run({"resample", "--gamma", "0.2", ws.path("in.json"), "-o", ws.path("out.json")}).code, 0);
  const auto out = std::get<DenseSequence>(io::read_sequence(ws.path("out.json")));
  EXPECT_EQ(out.size(), 20u);
  EXPECT_EQ(out.fps(), 5.0);

  ASSERT_EQ(ws.run({"resample", "--factor", "5", ws.path("out.json"), "-o", ws.path("up.json")}).code, 0);
  EXPECT_EQ(std::get<DenseSequence>(io::read_sequence(ws.path("up.json"))).size(), 96u);
  ASSERT_EQ(ws.run({"resample", "--target-len", "7", ws.path("out.json"), "-o", ws.path("len.json")}).code, 0);
  EXPECT_EQ(std::get<DenseSequence>(io::read_sequence(ws.path("len.json"))).size(), 7u);

  // Environment supplies gamma when no flag is given; the flag wins otherwise.
  ASSERT_EQ(ws.run({"resample", ws.path("in.json"), "-o", ws.path("e.json")}, "AUHEAD_GAMMA=0.5 ").code, 0);
  EXPECT_EQ(std::get<DenseSequence>(io::read_sequence(ws.path("e.json"))).size(), 50u);
  ASSERT_EQ(
      ws.run({"resample", "--gamma", "0.25", ws.path("in.json"), "-o", ws.path("f.json")}, "AUHEAD_GAMMA=0.5 ").code,
      0);
  EXPECT_EQ(std::get<DenseSequence>(io::read_sequence(ws.path("f.json"))).size(), 25u);

  const auto bad = ws.run({"resample", "--gamma", "0.3", ws.path("in.json")});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.err.find("--gamma"), std::string::npos);
  EXPECT_EQ(ws.run({"resample", "--gamma", "0.2", "--factor", "2", ws.path("in.json")}).code, 1);
}

TEST(Cli, GuideScalesAndDefaults) {
  cli::Workspace ws("auhead_cli_guide");
  ws.write("nn.f32", f32_file(0.2f));
  ws.write("hn.f32", f32_file(0.3f));
  ws.write("na.f32", f32_file(0.1f));
  ws.write("ha.f32", f32_file(0.5f));
  const std::vector<std::string> inputs{ws.path("nn.f32"), ws.path("hn.f32"), ws.path("na.f32"), ws.path("ha.f32")};

  std::vector<std::string> args{"guide", "--s-h", "1", "--s-au", "2", "--inputs"};
  args.insert(args.end(), inputs.begin(), inputs.end());
  args.insert(args.end(), {"--out", ws.path("o.f32")});
  ASSERT_EQ(ws.run(args).code, 0);
  const auto v = read_f32(ws, "o.f32");
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NEAR(v[0], 0.6f, 1e-6f);

  // default s_au = 3.5, s_h = 1: 0.1 + 0.1 + 3.5 * 0.2 = 0.9
  std::vector<std::string> defaults{"guide", "--inputs"};
  defaults.insert(defaults.end(), inputs.begin(), inputs.end());
  defaults.insert(defaults.end(), {"--out", ws.path("d.f32")});
  ASSERT_EQ(ws.run(defaults).code, 0);
  EXPECT_NEAR(read_f32(ws, "d.f32")[0], 0.9f, 1e-6f);
  ASSERT_EQ(ws.run(defaults, "AUHEAD_S_AU=2 ").code, 0);
  EXPECT_NEAR(read_f32(ws, "d.f32")[0], 0.6f, 1e-6f);

  ws.write("short.f32", "");
  std::vector<std::string> mismatch{"guide", "--inputs", inputs[0], inputs[1], inputs[2], ws.path("short.f32")};
  const auto r = ws.run(mismatch);
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("--inputs"), std::string::npos);
  std::vector<std::string> negative{"guide", "--s-au", "-1", "--inputs"};
  negative.insert(negative.end(), inputs.begin(), inputs.end());
  EXPECT_EQ(ws.run(negative).code, 1);
}

TEST(Cli, PromptsBuildAndParse) {
  cli::Workspace ws("auhead_cli_prompts");
  std::filesystem::create_directories(ws.dir() / "audio");
  std::filesystem::create_directories(ws.dir() / "au");
  ws.write("audio/b_clip.wav", "RIFF");
  ws.write("audio/a_clip.wav", "RIFF");
  std::mt19937_64 rng(3);
  io::write_sequence(oracle::random_quantized_sequence(rng, 25, 25.0), ws.path("au/a_clip.json"));
  io::write_sequence(oracle::random_quantized_sequence(rng, 5, 5.0), ws.path("au/b_clip.ausq"));
  ws.write("emotions.json", R"({"a_clip": "surprise", "b_clip": "happy"})");

  const auto r = ws.run({"prompts", "build", "--audio-dir", ws.path("audio"), "--au-dir", ws.path("au"), "--emotions",
                         ws.path("emotions.json"), "--out", ws.path("corpus.jsonl")});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string corpus = ws.read("corpus.jsonl");
  std::istringstream lines(corpus);
  std::string first, second, extra;
  ASSERT_TRUE(std::getline(lines, first));
  ASSERT_TRUE(std::getline(lines, second));
  EXPECT_FALSE(std::getline(lines, extra));
  const auto rec = nlohmann::json::parse(first);
  EXPECT_NE(rec["messages"][0]["audio"].get<std::string>().find("a_clip.wav"), std::string::npos);
  const std::string answer = rec["messages"][1]["content"];
  EXPECT_EQ(answer.rfind("surprise, [[", 0), 0u);
  EXPECT_EQ(oracle::closed_frames(answer), 5u);  // 25 frames at 25 fps decimated to 5 fps

  ASSERT_EQ(ws.run({"prompts", "build", "--audio-dir", ws.path("audio"), "--inference", "--out",
                    ws.path("inf.jsonl")})
                .code,
            0);
  const auto inf = nlohmann::json::parse(ws.read("inf.jsonl").substr(0, ws.read("inf.jsonl").find('\n')));
  EXPECT_EQ(inf["messages"].size(), 1u);
  EXPECT_EQ(inf["messages"][0]["content"], rec["messages"][0]["content"]);

  ws.write("answer.txt", answer.substr(0, answer.size() - 9));
  const auto p = ws.run({"prompts", "parse", "--in", ws.path("answer.txt"), "--out", ws.path("parsed.json")});
  ASSERT_EQ(p.code, 0) << p.err;
  const auto report = nlohmann::json::parse(p.out);
  EXPECT_EQ(report["emotion"], "surprise");
  EXPECT_TRUE(report["dropped_suffix"].get<bool>());
  EXPECT_EQ(report["complete_frames"].get<std::size_t>(), oracle::closed_frames(answer.substr(0, answer.size() - 9)));
  EXPECT_EQ(std::get<SparseSequence>(io::read_sequence(ws.path("parsed.json"))).size(),
            report["complete_frames"].get<std::size_t>());

  ws.write("emotions_missing.json", R"({"a_clip": "surprise"})");
  const auto missing = ws.run({"prompts", "build", "--audio-dir", ws.path("audio"), "--au-dir", ws.path("au"),
                               "--emotions", ws.path("emotions_missing.json"), "--out", ws.path("x.jsonl")});
  EXPECT_EQ(missing.code, 1);
  EXPECT_NE(missing.err.find("--emotions"), std::string::npos);
}

TEST(Cli, RenderAndEval) {
  cli::Workspace ws("auhead_cli_render");
  std::mt19937_64 rng(4);
  io::write_sequence(oracle::random_quantized_sequence(rng, 3, 5.0), ws.path("a.json"));
  ASSERT_EQ(ws.run({"render", ws.path("a.json"), "--mode", "rom", "--size", "64x48", "--out-dir", ws.path("img"),
                    "--landmarks", ws.path("lm.json")})
                .code,
            0);
  const auto img = io::decode_pgm(io::read_bytes(ws.path("img/frame_000002.pgm")));
  EXPECT_EQ(img.width, 64);
  EXPECT_EQ(img.height, 48);
  EXPECT_EQ(io::landmarks_from_json(ws.read("lm.json")).size(), 3u);

  const auto same = ws.run({"eval", "image", "--pred", ws.path("img/frame_000000.pgm"), "--gt",
                            ws.path("img/frame_000000.pgm")});
  ASSERT_EQ(same.code, 0);
  const auto rep = nlohmann::json::parse(same.out);
  EXPECT_EQ(rep["psnr"], "inf");
  EXPECT_NEAR(rep["ssim"].get<double>(), 1.0, 1e-9);

  const auto dirs = ws.run({"eval", "image", "--pred", ws.path("img"), "--gt", ws.path("img")});
  ASSERT_EQ(dirs.code, 0);
  EXPECT_EQ(nlohmann::json::parse(dirs.out)["images"], 3);

  ASSERT_EQ(ws.run({"render", ws.path("a.json"), "--size", "64x48", "--stream", ws.path("all.pgm")}).code, 0);
  const auto stream = io::decode_pgm_stream(io::read_bytes(ws.path("all.pgm")));
  ASSERT_EQ(stream.size(), 3u);
  EXPECT_EQ(stream[2], img);
  const auto streamed = ws.run({"eval", "image", "--pred", ws.path("all.pgm"), "--gt", ws.path("all.pgm")});
  ASSERT_EQ(streamed.code, 0);
  EXPECT_EQ(nlohmann::json::parse(streamed.out)["identical_images"], 3);
  EXPECT_EQ(ws.run({"eval", "image", "--pred", ws.path("all.pgm"), "--gt", ws.path("img/frame_000000.pgm")}).code, 1);

  const auto lmd = ws.run({"eval", "lmd", "--pred", ws.path("lm.json"), "--gt", ws.path("lm.json")});
  ASSERT_EQ(lmd.code, 0);
  EXPECT_EQ(nlohmann::json::parse(lmd.out)["m_lmd"], 0.0);

  const auto au = ws.run({"eval", "au", "--pred", ws.path("a.json"), "--gt", ws.path("a.json")});
  ASSERT_EQ(au.code, 0);
  const auto aur = nlohmann::json::parse(au.out);
  EXPECT_EQ(aur["f1"], 1.0);
  EXPECT_EQ(aur["tp"].get<std::size_t>() + aur["tn"].get<std::size_t>(), 72u);

  ws.write("p.txt", "happy\nsad\n");
  ws.write("g.txt", "Happy\nangry\n");
  const auto emo = ws.run({"eval", "emotion", "--pred", ws.path("p.txt"), "--gt", ws.path("g.txt")});
  ASSERT_EQ(emo.code, 0);
  EXPECT_EQ(nlohmann::json::parse(emo.out)["accuracy"], 0.5);

  EXPECT_EQ(ws.run({"render", ws.path("a.json"), "--size", "4x4", "--out-dir", ws.path("x")}).code, 1);
  EXPECT_EQ(ws.run({"render", ws.path("a.json"), "--mode", "mesh", "--out-dir", ws.path("x")}).code, 1);
}

TEST(Cli, EmbedWithGeneratedKernel) {
  cli::Workspace ws("auhead_cli_embed");
  std::mt19937_64 rng(5);
  io::write_sequence(oracle::random_quantized_sequence(rng, 6, 5.0), ws.path("a.json"));
  ASSERT_EQ(ws.run({"embed", "--init-kernel", ws.path("k.bin"), "--dim", "4", "--seed", "3"}).code, 0);
  const auto r = ws.run({"embed", ws.path("a.json"), "--kernel", ws.path("k.bin"), "-n", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["frames"].size(), 6u);
  EXPECT_EQ(doc["frames"][0].size(), 4u);
  const auto wrong = ws.run({"embed", ws.path("a.json"), "--kernel", ws.path("k.bin"), "-n", "1"});
  EXPECT_EQ(wrong.code, 1);
  EXPECT_NE(wrong.err.find("-n"), std::string::npos);
  EXPECT_EQ(ws.run({"embed", ws.path("a.json"), "--kernel", ws.path("k.bin")}, "AUHEAD_N=3 ").code, 1);
}

TEST(Cli, ExitCodesAndDiagnostics) {
  cli::Workspace ws("auhead_cli_errors");
  EXPECT_EQ(ws.run({"encode", ws.path("missing.json")}).code, 2);
  ws.write("bad.json", "{\"fps\": 5, \"n_units\": 23, \"representation\": \"dense\", \"frames\": []}");
  const auto schema = ws.run({"--json", "decode", ws.path("bad.json")});
  EXPECT_EQ(schema.code, 1);
  const auto diag = nlohmann::json::parse(schema.err);
  EXPECT_EQ(diag["kind"], "SchemaError");
  EXPECT_EQ(diag["exit_code"], 1);
  EXPECT_TRUE(schema.out.empty());

  ws.write("in.json", footnote_json());
  const auto lambda = ws.run({"--json", "encode", ws.path("in.json"), "--lambda", "1.5"});
  EXPECT_EQ(lambda.code, 1);
  EXPECT_EQ(nlohmann::json::parse(lambda.err)["flag"], "--lambda");
  EXPECT_EQ(ws.run({"encode", ws.path("in.json")}, "AUHEAD_LAMBDA=abc ").code, 1);
  EXPECT_EQ(ws.run({"bogus"}).code, 1);
  EXPECT_EQ(ws.run({}).code, 1);
  EXPECT_EQ(ws.run({"encode", "--help"}).code, 0);
  const auto info = ws.run({"info"});
  ASSERT_EQ(info.code, 0);
  EXPECT_EQ(nlohmann::json::parse(info.out)["defaults"]["s_au"], 3.5);
}

TEST(Cli, FuzzedInputsFailCleanly) {
  cli::Workspace ws("auhead_cli_fuzz");
  std::mt19937_64 rng(6);
  const AuSequence seq = oracle::random_quantized_sequence(rng, 4, 25.0);
  const auto bin = io::sequence_to_binary(seq);
  const std::string json = io::sequence_to_json(seq);
  for (int trial = 0; trial < 40; ++trial) {
    std::string data = trial % 2 ? std::string(bin.begin(), bin.end()) : json;
    for (int e = 0; e < 3; ++e) data[rng() % data.size()] = static_cast<char>(rng() & 0xff);
    ws.write("f.bin", data);
    for (const char* sub : {"decode", "render", "encode"}) {
      std::vector<std::string> args{sub, ws.path("f.bin")};
      if (std::strcmp(sub, "render") == 0) args.insert(args.end(), {"--landmarks", ws.path("lm.json")});
      const auto r = ws.run(args);
      EXPECT_TRUE(r.code == 0 || r.code == 1) << sub << " exited " << r.code << ": " << r.err;
      if (r.code != 0) {
        EXPECT_FALSE(r.err.empty());
      }
    }
  }
}

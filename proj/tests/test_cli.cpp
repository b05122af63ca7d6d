#include "doctest.h"

#include "dyco/cli.hpp"
#include "dyco/config.hpp"

#include <filesystem>
#include <random>
#include <sstream>

#include <unistd.h>

using namespace dyco;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("dyco-cli-" + name + "-" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

const std::string kDict = DYCO_DATA_DIR "/dictionary.jsonl";
const std::string kPsk = "00112233445566778899aabbccddeeff";

std::string random_bits(std::mt19937_64& rng, std::size_t n) {
    std::string s(n, '0');
    for (auto& c : s) c = (rng() & 1) ? '1' : '0';
    return s;
}

} // namespace

TEST_CASE("session init") {
    auto dir = scratch("init");
    auto cfg = (dir / "sub" / "config.json").string();
    auto r = cli({"session", "init", "--config", cfg, "--psk", kPsk, "--seeds", "Sea, sun,shell", "--anchor", "!!~",
                  "--dictionary", kDict});
    CHECK(r.code == 0);
    CHECK(r.out.find("seed words: shell, sun, sea") != std::string::npos);
    CHECK(load_config(cfg).seed_words == WordList{"shell", "sun", "sea"});

    r = cli({"session", "init", "--config", cfg, "--psk", kPsk, "--seeds", "sun,zzqx", "--anchor", "!", "--dictionary",
             kDict});
    CHECK(r.code == 2);
    CHECK(r.err.find("zzqx") != std::string::npos);

    r = cli({"session", "init", "--config", cfg, "--psk", kPsk, "--seeds", "sun,sea", "--anchor", "!", "--dictionary",
             kDict, "--alpha", "300", "--b", "8"});
    CHECK(r.code == 2);
    CHECK(r.err.find("exceeds") != std::string::npos);

    r = cli({"session", "init", "--config", cfg, "--psk", "0011", "--seeds", "sun", "--anchor", "!", "--dictionary",
             kDict});
    CHECK(r.code == 2);
    fs::remove_all(dir);
}

TEST_CASE("exit codes") {
    auto dir = scratch("codes");
    auto cfg = (dir / "config.json").string();
    REQUIRE(cli({"session", "init", "--config", cfg, "--psk", kPsk, "--seeds", "sun,sea,shell", "--anchor", "!!~",
                 "--dictionary", kDict})
                .code == 0);
    std::mt19937_64 rng(11);
    auto msg = random_bits(rng, 140);

    CHECK(cli({}).code == 2);
    CHECK(cli({"--help"}).code == 0);
    CHECK(cli({"frobnicate"}).code == 2);
    CHECK(cli({"embed", "--config", cfg}).code == 2);

    // wrong length, not bits, hex without length
    CHECK(cli({"embed", "--config", cfg, "--message", "0101", "--out", (dir / "x").string()}).code == 2);
    CHECK(cli({"embed", "--config", cfg, "--message", "01a1", "--out", (dir / "x").string()}).code == 2);
    CHECK(cli({"embed", "--config", cfg, "--message", "ff", "--bit-length", "9", "--out", (dir / "x").string()})
              .code == 2);

    write_text_file(dir / "never.json", R"({"default_image": {"drop": 1}})");
    auto r = cli({"embed", "--config", cfg, "--message", msg, "--out", (dir / "x").string(), "--mock",
                  (dir / "never.json").string(), "--transcript", (dir / "t").string()});
    CHECK(r.code == 3);
    CHECK(fs::exists(dir / "t" / "embed-transcript.json"));
    CHECK_FALSE(fs::exists(dir / "x" / "caption.txt"));

    write_text_file(dir / "mute.json", R"({"default_caption": {"violate": "missing_anchor"}})");
    CHECK(cli({"embed", "--config", cfg, "--message", msg, "--out", (dir / "x").string(), "--mock",
               (dir / "mute.json").string()})
              .code == 3);

    CHECK(cli({"embed", "--config", (dir / "absent.json").string(), "--message", msg, "--out", "x"}).code == 2);
    write_text_file(dir / "bad-schedule.json", R"({"image": [{"drop": -1}]})");
    CHECK(cli({"embed", "--config", cfg, "--message", msg, "--out", (dir / "x").string(), "--mock",
               (dir / "bad-schedule.json").string()})
              .code == 2);
    fs::remove_all(dir);
}

TEST_CASE("embed then extract through the command line") {
    auto dir = scratch("roundtrip");
    auto cfg = (dir / "config.json").string();
    REQUIRE(cli({"session", "init", "--config", cfg, "--psk", kPsk, "--seeds", "tree,river,dog", "--anchor", "~*",
                 "--dictionary", kDict})
                .code == 0);
    write_text_file(dir / "schedule.json", R"({"image": [{"drop": 2}], "caption": [{"violate": "forbidden_word"}]})");
    std::mt19937_64 rng(5);
    auto msg = random_bits(rng, 140);
    auto bundle = (dir / "bundle").string();

    auto e = cli({"embed", "--config", cfg, "--message", msg, "--out", bundle, "--mock",
                  (dir / "schedule.json").string(), "--transcript", (dir / "t").string()});
    REQUIRE(e.code == 0);
    CHECK(e.out.find("attempts: image 2, caption 2") != std::string::npos);

    auto x = cli({"extract", "--config", cfg, "--bundle", bundle, "--transcript", (dir / "t").string()});
    CHECK(x.code == 0);
    CHECK(x.out.find("bits: " + msg + "\n") != std::string::npos);
    CHECK(fs::exists(dir / "t" / "extract-transcript.json"));

    // hex input gives the same bundle
    auto hex = bits_to_hex(BitString(msg));
    auto h = cli({"embed", "--config", cfg, "--message", hex, "--bit-length", "140", "--out",
                  (dir / "bundle-hex").string(), "--mock", (dir / "schedule.json").string()});
    CHECK(h.code == 0);
    CHECK(read_bundle(dir / "bundle-hex") == read_bundle(bundle));

    // separate key: full text, bare hex or a file
    auto key = read_text_file(dir / "bundle" / "s_key.txt");
    key.pop_back();
    fs::rename(dir / "bundle" / "s_key.txt", dir / "key.txt");
    CHECK(cli({"extract", "--config", cfg, "--bundle", bundle}).code == 2);
    CHECK(cli({"extract", "--config", cfg, "--bundle", bundle, "--s-key", key}).code == 0);
    CHECK(cli({"extract", "--config", cfg, "--bundle", bundle, "--s-key", key.substr(key.rfind(':') + 1)}).code == 0);
    CHECK(cli({"extract", "--config", cfg, "--bundle", bundle, "--s-key", (dir / "key.txt").string()}).code == 0);
    CHECK(cli({"extract", "--config", cfg, "--bundle", bundle, "--s-key", "5:28:zz"}).code == 2);

    // a tampered caption is a protocol failure, not a usage error
    write_text_file(dir / "bundle" / "caption.txt", "nothing to see here ~*");
    CHECK(cli({"extract", "--config", cfg, "--bundle", bundle, "--s-key", key}).code == 1);
    fs::remove_all(dir);
}

TEST_CASE("diagnostic subcommands") {
    auto dir = scratch("diag");
    auto cfg = (dir / "config.json").string();
    REQUIRE(cli({"session", "init", "--config", cfg, "--psk", kPsk, "--seeds", "sun,sea,shell", "--anchor", "!!~",
                 "--dictionary", kDict})
                .code == 0);
    auto dump = cli({"codebook", "dump", "--config", cfg});
    CHECK(dump.code == 0);
    auto j = nlohmann::json::parse(dump.out);
    CHECK(j["entries"].size() == 24);
    CHECK(cli({"codebook", "dump", "--config", cfg}).out == dump.out);
    CHECK(cli({"codebook", "dump", "--config", cfg, "--seeds", "sun,sea"}).out != dump.out);

    write_text_file(dir / "good.txt", "Caught sea and sun today !!~");
    write_text_file(dir / "bad.txt", "Caught sun and sea with a shell");
    CHECK(cli({"verify-caption", "--config", cfg, "--caption", (dir / "good.txt").string(), "--codewords", "sea,sun"})
              .code == 0);
    auto bad = cli({"verify-caption", "--config", cfg, "--caption", (dir / "bad.txt").string(), "--codewords",
                    "sea,sun"});
    CHECK(bad.code == 1);
    CHECK(bad.out.find("missing_anchor") != std::string::npos);
    CHECK(bad.out.find("forbidden_word") != std::string::npos);
    CHECK(bad.out.find("wrong_order") != std::string::npos);
    CHECK(cli({"verify-caption", "--config", cfg, "--caption", (dir / "good.txt").string(), "--codewords", "zebra"})
              .code == 2);

    std::string words;
    for (int i = 0; i < 22; ++i) words += "w ";
    write_text_file(dir / "cap.txt", words);
    auto ec = cli({"metrics", "ec", "--bits", "140", "--caption", (dir / "cap.txt").string()});
    CHECK(ec.code == 0);
    CHECK(ec.out.find("bpw: 6.3636") != std::string::npos);
    write_text_file(dir / "empty.txt", "   ");
    CHECK(cli({"metrics", "ec", "--bits", "140", "--caption", (dir / "empty.txt").string()}).code == 2);

    write_text_file(dir / "x.csv", "0\n2\n");
    write_text_file(dir / "y.csv", "0\n2\n");
    write_text_file(dir / "z.csv", "0,1\n2,3\n");
    auto kld = cli({"metrics", "kld", "--cover", (dir / "x.csv").string(), "--stego", (dir / "y.csv").string()});
    CHECK(kld.code == 0);
    CHECK(kld.out == "kld: 0\n");
    CHECK(cli({"metrics", "kld", "--cover", (dir / "x.csv").string(), "--stego", (dir / "z.csv").string()}).code == 2);
    CHECK(cli({"metrics", "kld", "--cover", (dir / "none.csv").string(), "--stego", (dir / "z.csv").string()})
              .code == 2);
    fs::remove_all(dir);
}

TEST_CASE("argument fuzzing never escapes the exit-code contract") {
    auto dir = scratch("fuzz");
    auto cfg = (dir / "config.json").string();
    REQUIRE(cli({"session", "init", "--config", cfg, "--psk", kPsk, "--seeds", "sun,sea,shell", "--anchor", "!!~",
                 "--dictionary", kDict})
                .code == 0);
    write_text_file(dir / "cap.txt", "sea and sun !!~");
    const std::vector<std::string> vocab = {
        "session", "init", "embed", "extract", "codebook", "dump", "verify-caption", "metrics", "ec", "kld",
        "--config", cfg, "--psk", kPsk, "--seeds", "sun,sea", "--anchor", "!", "--dictionary", kDict,
        "--message", "0101", "--bit-length", "-3", "--out", (dir / "o").string(), "--bundle", (dir / "o").string(),
        "--s-key", "5:28:00", "--retries", "99999999999999999999", "--caption", (dir / "cap.txt").string(),
        "--codewords", "sea", "--bits", "x", "--cover", "--stego", "--alpha", "0", "--b", "64", "--sigma", "nan",
        "--tau", "", "\xff\xfe", "--", "-h", "--mock", cfg};
    std::mt19937_64 rng(2024);
    for (int t = 0; t < 400; ++t) {
        std::vector<std::string> args(rng() % 9);
        for (auto& a : args) a = vocab[rng() % vocab.size()];
        auto r = cli(args);
        CHECK_MESSAGE((r.code >= 0 && r.code <= 3), "args produced exit ", r.code);
    }
    fs::remove_all(dir);
}

TEST_CASE("config fuzzing never escapes the exit-code contract") {
    auto dir = scratch("cfgfuzz");
    auto cfg = dir / "config.json";
    REQUIRE(cli({"session", "init", "--config", cfg.string(), "--psk", kPsk, "--seeds", "sun,sea,shell", "--anchor",
                 "!!~", "--dictionary", kDict})
                .code == 0);
    const auto good = read_text_file(cfg);
    std::mt19937_64 rng(77);
    const std::string noise = "{}[],:\"0-9ex \\\n\x01\xc3";
    int rejected = 0;
    for (int t = 0; t < 300; ++t) {
        auto text = good;
        int edits = 1 + static_cast<int>(rng() % 4);
        for (int e = 0; e < edits; ++e) {
            auto pos = rng() % text.size();
            switch (rng() % 3) {
            case 0: text.erase(pos, 1 + rng() % 6); break;
            case 1: text.insert(pos, 1, noise[rng() % noise.size()]); break;
            default: text[pos] = noise[rng() % noise.size()]; break;
            }
            if (text.empty()) text = "{";
        }
        write_text_file(cfg, text);
        auto r = cli({"codebook", "dump", "--config", cfg.string()});
        CHECK((r.code == 0 || r.code == 2));
        if (r.code == 2) ++rejected;
    }
    CHECK(rejected > 0);
    fs::remove_all(dir);
}

TEST_CASE("extract on the golden bundle") {
    const fs::path golden = DYCO_TEST_DIR "/golden";
    auto r = cli({"extract", "--config", (golden / "config.json").string(), "--bundle", (golden / "expected").string()});
    CHECK(r.code == 0);
    CHECK(r.out == read_text_file(golden / "expected" / "extract-stdout.txt"));
    auto message = read_text_file(golden / "message.txt");
    CHECK(r.out.find("bits: " + message) == 0);
}

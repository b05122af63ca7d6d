#include "doctest.h"

#include "stub_server.hpp"

#include "dyco/error.hpp"
#include "dyco/orchestration.hpp"

#include <cstdlib>
#include <filesystem>
#include <random>

#include <unistd.h>

using namespace dyco;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("dyco-http-" + name + "-" + std::to_string(::getpid()));
    fs::remove_all(p);
    return p;
}

BackendConfig http_config(const stub::Server& s) {
    ::setenv("DYCO_STUB_TOKEN", "test-token", 1);
    BackendConfig c;
    c.kind = "http";
    c.endpoint = s.endpoint();
    c.credential_env = "DYCO_STUB_TOKEN";
    c.model = "stub-model";
    c.timeout_ms = 5000;
    c.retries = 2;
    c.backoff_ms = 0;
    return c;
}

Errc code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error");
    return Errc::io;
}

} // namespace

TEST_CASE("base64") {
    for (std::string s : std::vector<std::string>{"", "f", "fo", "foo", "foob", "fooba", "foobar", std::string("\0\xff\x10", 3)}) {
        CHECK(base64_decode(base64_encode(s)) == s);
    }
    CHECK(base64_encode("foobar") == "Zm9vYmFy");
    CHECK(base64_encode("fo") == "Zm8=");
    CHECK(code_of([] { (void)base64_decode("abc"); }) == Errc::format);
}

TEST_CASE("http backend against the stub server") {
    stub::Server server;
    auto dir = scratch("basic");
    HttpBackend http(http_config(server), dir);

    auto prompt = render_prompt(PromptSet::defaults().generation, {{"scene", "beach"}, {"seed_words", "sun, sea"}});
    auto img = http.generate_image(prompt);
    CHECK(img.id == "http-img-1");
    CHECK(fs::exists(img.path));
    CHECK_FALSE(img.scene.has_value());

    auto refined = http.refine_image(img, "make it brighter");
    CHECK(refined.id == "http-img-2");
    CHECK(refined.path != img.path);

    auto words = http.extract_seed_words(img, PromptSet::defaults().extraction.body);
    CHECK(words == std::vector<std::string>{"sun", "sea"});

    auto text = http.generate_text(nullptr, "Say something.", TextPurpose::caption_feedback);
    CHECK(text == "Please follow the constraints exactly.");

    auto log = server.log();
    REQUIRE(log.size() == 4);
    auto chat = nlohmann::json::parse(log[2].request);
    CHECK(chat["model"] == "stub-model");
    CHECK(chat["messages"][0]["role"] == "user");
    CHECK(chat["messages"][0]["content"][1]["image_url"]["url"].get<std::string>().rfind("data:image/png;base64,", 0) ==
          0);
    CHECK(nlohmann::json::parse(log[3].request)["messages"][0]["content"].size() == 1);
    fs::remove_all(dir);
}

TEST_CASE("retries, fatal errors and credentials") {
    stub::Server server;
    auto dir = scratch("retry");
    auto cfg = http_config(server);
    HttpBackend http(cfg, dir);

    server.fail_next(2);
    CHECK(http.generate_text(nullptr, "hello", TextPurpose::caption_feedback) == "Please follow the constraints exactly.");
    CHECK(server.log().size() == 3);

    server.fail_next(3);
    CHECK(code_of([&] { (void)http.generate_text(nullptr, "hello", TextPurpose::caption_feedback); }) ==
          Errc::backend_fatal);

    // a 4xx is not retried
    auto before = server.log().size();
    CHECK(code_of([&] { (void)http.generate_image("no objects here"); }) == Errc::backend_fatal);
    CHECK(code_of([&] { (void)http.extract_seed_words(ImageRef{"x", "https://images.invalid/1", std::nullopt},
                                                      "words: w1"); }) == Errc::backend_fatal);
    CHECK(server.log().size() == before + 2);

    ::setenv("DYCO_WRONG_TOKEN", "nope", 1);
    auto wrong = cfg;
    wrong.credential_env = "DYCO_WRONG_TOKEN";
    HttpBackend unauthorized(wrong, dir);
    CHECK(code_of([&] { (void)unauthorized.generate_text(nullptr, "hi", TextPurpose::caption); }) ==
          Errc::backend_fatal);

    auto unset = cfg;
    unset.credential_env = "DYCO_SURELY_UNSET_VARIABLE";
    ::unsetenv("DYCO_SURELY_UNSET_VARIABLE");
    CHECK(code_of([&] { HttpBackend h(unset, dir); }) == Errc::config);

    auto closed = cfg;
    closed.endpoint = "http://127.0.0.1:1";
    closed.retries = 1;
    HttpBackend nowhere(closed, dir);
    CHECK(code_of([&] { (void)nowhere.generate_text(nullptr, "hi", TextPurpose::caption); }) == Errc::backend_fatal);

    server.use_urls(true);
    auto by_url = http.generate_image("Objects: sun\n");
    CHECK(by_url.path == "https://images.invalid/1");
    fs::remove_all(dir);
}

TEST_CASE("pipelines run unmodified against the http backend") {
    stub::Server server;
    auto dir = scratch("pipeline");
    const Dictionary dict = load_dictionary_file(DYCO_DATA_DIR "/dictionary.jsonl");
    std::mt19937_64 rng(79);
    for (int t = 0; t < 5; ++t) {
        Bytes psk(16);
        for (auto& x : psk) x = static_cast<std::uint8_t>(rng());
        SessionPlan plan{PresharedKey(psk), {"sun", "sea", "shell"}, AnchorSequence("!!~"), SessionParams{}};
        std::string bits(140, '0');
        for (auto& c : bits) c = (rng() & 1) ? '1' : '0';
        SecretMessage m{BitString(bits), 5, 28};

        HttpBackend sender(http_config(server), dir / "send");
        auto out = embed_pipeline(plan, m, dict, {sender, sender});
        CHECK(out.bundle.image_attempts == 1);

        HttpBackend receiver(http_config(server), dir / "recv");
        CHECK(extract_pipeline(out.bundle, plan.psk, dict, SessionParams{}, 5, receiver).message == m);
    }
    fs::remove_all(dir);
}

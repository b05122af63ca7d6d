#include "doctest.h"

#include "dyco/backend.hpp"
#include "dyco/error.hpp"
#include "dyco/mock_backend.hpp"
#include "dyco/prompts.hpp"

using namespace dyco;

namespace {

Errc code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error");
    return Errc::io;
}

const std::string kImagePrompt = render_prompt(PromptSet::defaults().generation,
                                               {{"scene", "a beach"}, {"seed_words", "sun, sea, shell"}});

std::string caption_prompt(const std::string& codewords, const std::string& anchor, const std::string& forbidden) {
    return render_prompt(PromptSet::defaults().embedding,
                         {{"codewords", codewords}, {"anchor", anchor}, {"forbidden", forbidden}});
}

} // namespace

TEST_CASE("render_prompt") {
    PromptTemplate t{"gen", "Scene: {scene}. Objects: {seed_words}."};
    CHECK(render_prompt(t, {{"scene", "beach"}, {"seed_words", "sun, sea"}}) == "Scene: beach. Objects: sun, sea.");

    PromptTemplate needs_anchor{"emb", "Anchor: {anchor}"};
    try {
        (void)render_prompt(needs_anchor, {{"scene", "x"}});
        FAIL("expected template error");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::template_error);
        CHECK(std::string(e.what()).find("{anchor}") != std::string::npos);
    }

    // bound values are not expanded again
    CHECK(render_prompt(t, {{"scene", "{seed_words}"}, {"seed_words", "sun"}}) == "Scene: {seed_words}. Objects: sun.");
    // non-placeholder braces are literal
    PromptTemplate literal{"lit", "{ } {} {Upper} {x1} {ok}"};
    CHECK(render_prompt(literal, {{"ok", "y"}}) == "{ } {} {Upper} {x1} y");

    auto defaults = PromptSet::defaults();
    CHECK_NOTHROW((void)render_prompt(defaults.generation, {{"scene", "s"}, {"seed_words", "w"}}));
    CHECK_NOTHROW((void)render_prompt(defaults.extraction, {}));
    CHECK_NOTHROW((void)render_prompt(defaults.image_feedback, {{"expected", "a"}, {"extracted", "b"}}));
    CHECK_NOTHROW((void)render_prompt(defaults.embedding, {{"codewords", "a"}, {"anchor", "!"}, {"forbidden", "b"}}));
    CHECK_NOTHROW((void)render_prompt(defaults.caption_feedback, {{"caption", "c"},
                                                                  {"violations", "v"},
                                                                  {"codewords", "a"},
                                                                  {"anchor", "!"}}));
}

TEST_CASE("parse_word_list_reply") {
    CHECK(parse_word_list_reply("words: sun, sea, shell") == std::vector<std::string>{"sun", "sea", "shell"});
    CHECK(parse_word_list_reply("Sure!\n  WORDS:  Sun ,SEA.,  shell!\nthanks") ==
          std::vector<std::string>{"sun", "sea", "shell"});
    CHECK(parse_word_list_reply("words: sun, sun, sea") == std::vector<std::string>{"sun", "sea"});
    CHECK(code_of([] { (void)parse_word_list_reply("I see the sun and the sea"); }) == Errc::extraction_parse);
    CHECK(code_of([] { (void)parse_word_list_reply("words: , ,"); }) == Errc::extraction_parse);
}

TEST_CASE("image reference json") {
    ImageRef mock{"mock-img-1", "", MockScene{{"sun", "sea"}, {"sun"}, {"light"}}};
    CHECK(ImageRef::from_json(mock.to_json()) == mock);
    ImageRef file{"http-img-2", "/tmp/x.png", std::nullopt};
    CHECK(ImageRef::from_json(file.to_json()) == file);
    CHECK(code_of([] { (void)ImageRef::from_json(nlohmann::json{{"id", "a"}, {"kind", "svg"}}); }) == Errc::format);
    CHECK(code_of([] { (void)ImageRef::from_json(nlohmann::json{{"id", "a"}}); }) == Errc::format);
}

TEST_CASE("mock images follow the schedule") {
    auto sched = FailureSchedule::from_json(nlohmann::json::parse(R"({
        "image": [{"drop": 1}, {"drop": ["sun"]}],
        "distractors": ["Light"]
    })"));
    MockBackend mock(sched);
    auto i1 = mock.generate_image(kImagePrompt);
    CHECK(i1.id == "mock-img-1");
    CHECK(i1.scene->intended == std::vector<std::string>{"sun", "sea", "shell"});
    CHECK(i1.scene->depicted == std::vector<std::string>{"sun", "sea"});
    CHECK(i1.scene->distractors == std::vector<std::string>{"light"});
    auto i2 = mock.refine_image(i1, "fix it");
    CHECK(i2.id == "mock-img-2");
    CHECK(i2.scene->depicted == std::vector<std::string>{"sea", "shell"});
    auto i3 = mock.refine_image(i2, "fix it");
    CHECK(i3.scene->depicted == i3.scene->intended);
    CHECK(mock.refine_image(i3, "again").scene->depicted == i3.scene->intended);

    CHECK(code_of([&] { (void)mock.generate_image("draw something"); }) == Errc::backend_fatal);
    CHECK(code_of([&] { (void)mock.refine_image(ImageRef{"x", "/a.png", std::nullopt}, "u"); }) == Errc::backend_fatal);
}

TEST_CASE("mock extraction follows the schedule") {
    auto sched = FailureSchedule::from_json(nlohmann::json::parse(R"({
        "extract": [{"spurious": ["rock"]}, {"miss": ["sea"]}, {}]
    })"));
    MockBackend mock(sched);
    auto img = mock.generate_image(kImagePrompt);
    auto prompt = PromptSet::defaults().extraction.body;
    CHECK(mock.extract_seed_words(img, prompt) == std::vector<std::string>{"sun", "sea", "shell", "rock"});
    CHECK(mock.extract_seed_words(img, prompt) == std::vector<std::string>{"sun", "shell"});
    CHECK(mock.extract_seed_words(img, prompt) == std::vector<std::string>{"sun", "sea", "shell"});
    CHECK(mock.counters().extractions == 3);
}

TEST_CASE("mock captions") {
    const std::vector<std::string> cw{"sea", "shell", "sea"};
    auto compliant = compose_mock_caption(cw, "!!~", {"sun", "sand"});
    CHECK(compliant == "Caught this moment with sea and shell near sea today !!~");

    CHECK(compose_mock_caption(cw, "!!~", {"sun"}, ViolationKind::forbidden_word).find("sun") != std::string::npos);
    CHECK(compose_mock_caption(cw, "!!~", {}, ViolationKind::missing_anchor).find("!!~") == std::string::npos);
    CHECK(compose_mock_caption(cw, "!!~", {}, ViolationKind::missing_codeword) ==
          "Caught this moment with shell and sea today !!~");
    CHECK(compose_mock_caption(cw, "!!~", {}, ViolationKind::wrong_order) ==
          "Caught this moment with shell and sea near sea today !!~");
    CHECK(compose_mock_caption(cw, "!!~", {}, ViolationKind::wrong_multiplicity) ==
          "Caught this moment with sea and sea near shell the sea today !!~");
    // fillers that collide with pool words are skipped
    CHECK(compose_mock_caption({"moment"}, "#", {"today", "this"}) == "Caught with moment #");

    auto sched = FailureSchedule::from_json(nlohmann::json::parse(R"({"caption": [{"violate": "forbidden_word"}]})"));
    MockBackend mock(sched);
    auto img = mock.generate_image(kImagePrompt);
    auto p = caption_prompt("sea, shell", "!!~", "sun, sand");
    CHECK(mock.generate_text(&img, p, TextPurpose::caption) ==
          "Caught this moment with sea and shell sun today !!~");
    CHECK(mock.generate_text(&img, p, TextPurpose::caption) == "Caught this moment with sea and shell today !!~");
    CHECK(code_of([&] { (void)mock.generate_text(nullptr, p, TextPurpose::caption); }) == Errc::backend_fatal);
    CHECK(code_of([&] { (void)mock.generate_text(&img, "no lines", TextPurpose::caption); }) == Errc::backend_fatal);
    CHECK(!mock.generate_text(&img, "Problems: x", TextPurpose::caption_feedback).empty());
    CHECK(mock.counters().captions == 2);
    CHECK(mock.counters().feedback == 1);

    CHECK(code_of([] { (void)FailureSchedule::from_json(nlohmann::json::parse(R"({"caption":[{"violate":"x"}]})")); }) ==
          Errc::config);
    CHECK(code_of([] { (void)FailureSchedule::from_json(nlohmann::json::array()); }) == Errc::config);
}

TEST_CASE("mock replays are deterministic and recorded") {
    auto run = [] {
        auto sched = FailureSchedule::from_json(nlohmann::json::parse(R"({"image":[{"drop":1}]})"));
        MockBackend mock(sched);
        Transcript t;
        RecordingBackend rec(mock, t);
        auto img = rec.generate_image(kImagePrompt);
        (void)rec.extract_seed_words(img, "words please");
        img = rec.refine_image(img, "fix");
        (void)rec.extract_seed_words(img, "words please");
        (void)rec.generate_text(&img, caption_prompt("sea", "!", "sun"), TextPurpose::caption);
        CHECK_THROWS_AS((void)rec.generate_image("nothing"), Error);
        return t.to_json();
    };
    auto a = run();
    CHECK(a == run());
    auto j = nlohmann::json::parse(a);
    REQUIRE(j.size() == 6);
    CHECK(j[0]["op"] == "generate_image");
    CHECK(j[1]["response"] == "words: sun, sea");
    CHECK(j[4]["purpose"] == "caption");
    CHECK(j[5]["response"].get<std::string>().rfind("ERROR ", 0) == 0);
}

#include "dyco/prompts.hpp"

#include "dyco/error.hpp"

namespace dyco {

namespace {

bool is_ident_char(char c) { return (c >= 'a' && c <= 'z') || c == '_'; }

} // namespace

std::string render_prompt(const PromptTemplate& tmpl, const PromptBindings& bindings) {
    const std::string& body = tmpl.body;
    std::string out;
    out.reserve(body.size());
    std::size_t i = 0;
    while (i < body.size()) {
        if (body[i] == '{') {
            std::size_t j = i + 1;
            while (j < body.size() && is_ident_char(body[j])) ++j;
            if (j < body.size() && body[j] == '}' && j > i + 1) {
                std::string_view name(body.data() + i + 1, j - i - 1);
                auto it = bindings.find(name);
                if (it == bindings.end()) {
                    throw Error(Errc::template_error, "template '" + tmpl.name + "' has unbound placeholder {" +
                                                          std::string(name) + "}");
                }
                out += it->second;
                i = j + 1;
                continue;
            }
        }
        out.push_back(body[i++]);
    }
    return out;
}

PromptSet PromptSet::defaults() {
    PromptSet p;
    p.generation = {"generation",
                    "Create a natural photograph of the following scene: {scene}\n"
                    "The picture must clearly show each of these objects and no other prominent objects.\n"
                    "Objects: {seed_words}\n"};
    p.extraction = {"extraction",
                    "List the main objects visible in this image as single lowercase nouns.\n"
                    "Answer with exactly one line in the form\n"
                    "words: w1, w2, w3\n"};
    p.image_feedback = {"image_feedback",
                        "The image was supposed to show exactly these objects: {expected}\n"
                        "A viewer instead recognised: {extracted}\n"
                        "Explain the discrepancy and write a short instruction for editing the image so that "
                        "exactly the expected objects are recognisable.\n"};
    p.embedding = {"embedding",
                   "Write a short, natural social-media caption for this image.\n"
                   "Rules:\n"
                   "- use every codeword below, in the given order, each exactly as many times as listed;\n"
                   "- include the anchor text verbatim;\n"
                   "- do not use any forbidden word.\n"
                   "Codewords: {codewords}\n"
                   "Anchor: {anchor}\n"
                   "Forbidden: {forbidden}\n"};
    p.caption_feedback = {"caption_feedback",
                          "This caption was rejected:\n"
                          "{caption}\n"
                          "Problems: {violations}\n"
                          "Required codewords in order: {codewords}\n"
                          "Anchor: {anchor}\n"
                          "Write a short instruction telling the writer how to fix the caption.\n"};
    return p;
}

} // namespace dyco

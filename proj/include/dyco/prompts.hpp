#ifndef DYCO_PROMPTS_HPP
#define DYCO_PROMPTS_HPP

#include <map>
#include <string>
#include <string_view>

namespace dyco {

/// Text with {placeholder} slots. Placeholders are lowercase identifiers;
/// any other brace usage is literal.
struct PromptTemplate {
    std::string name;
    std::string body;
};

using PromptBindings = std::map<std::string, std::string, std::less<>>;

/// Single-pass substitution: bound values are inserted verbatim and never
/// re-expanded. Throws Errc::template_error naming the first unbound slot.
std::string render_prompt(const PromptTemplate& tmpl, const PromptBindings& bindings);

/// The five prompts a session needs. The defaults keep one "Key: value"
/// line per constraint so the mock backend and the stub server can read
/// them back.
struct PromptSet {
    PromptTemplate generation;
    PromptTemplate extraction;
    PromptTemplate image_feedback;
    PromptTemplate embedding;
    PromptTemplate caption_feedback;

    static PromptSet defaults();
};

} // namespace dyco

#endif // DYCO_PROMPTS_HPP

#include "dyco/http_backend.hpp"

#include "dyco/error.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include <openssl/evp.h>

#include <cctype>
#include <chrono>
#include <cstdlib>
#include <thread>

namespace fs = std::filesystem;
using nlohmann::json;

namespace dyco {

std::string base64_encode(std::string_view bytes) {
    std::string out(4 * ((bytes.size() + 2) / 3), '\0');
    int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                            reinterpret_cast<const unsigned char*>(bytes.data()), static_cast<int>(bytes.size()));
    out.resize(static_cast<std::size_t>(n));
    return out;
}

std::string base64_decode(std::string_view text) {
    std::string clean;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) clean.push_back(c);
    }
    if (clean.size() % 4 != 0) throw Error(Errc::format, "base64 length is not a multiple of 4");
    std::string out(clean.size() / 4 * 3, '\0');
    int n = EVP_DecodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                            reinterpret_cast<const unsigned char*>(clean.data()), static_cast<int>(clean.size()));
    if (n < 0) throw Error(Errc::format, "malformed base64");
    std::size_t pad = 0;
    if (!clean.empty() && clean.back() == '=') ++pad;
    if (clean.size() > 1 && clean[clean.size() - 2] == '=') ++pad;
    out.resize(static_cast<std::size_t>(n) - pad);
    return out;
}

namespace {

std::string mime_for(const fs::path& p) {
    auto ext = p.extension().string();
    if (ext == ".png") return "image/png";
    if (ext == ".jpg" || ext == ".jpeg") return "image/jpeg";
    if (ext == ".webp") return "image/webp";
    if (ext == ".gif") return "image/gif";
    return "application/octet-stream";
}

bool is_url(const std::string& s) { return s.find("://") != std::string::npos; }

} // namespace

std::string image_url(const ImageRef& image) {
    if (image.scene) throw Error(Errc::backend_fatal, "mock image cannot be sent to an http backend");
    if (is_url(image.path)) return image.path;
    return "data:" + mime_for(image.path) + ";base64," + base64_encode(read_text_file(image.path));
}

HttpBackend::HttpBackend(BackendConfig config, fs::path image_dir)
    : config_(std::move(config)), image_dir_(std::move(image_dir)), in_flight_(1) {
    config_.validate();
    if (config_.kind != "http") throw Error(Errc::config, "HttpBackend needs an http backend config");
    const char* cred = std::getenv(config_.credential_env.c_str());
    if (cred == nullptr || *cred == '\0') {
        throw Error(Errc::config, "environment variable " + config_.credential_env + " is not set");
    }
    credential_ = cred;
    // the semaphore's initial count is fixed at construction; top it up to the cap
    if (config_.max_in_flight > 1024) throw Error(Errc::config, "max_in_flight is limited to 1024");
    in_flight_.release(static_cast<std::ptrdiff_t>(config_.max_in_flight) - 1);
}

json HttpBackend::post(const std::string& path, const json& body) {
    const auto payload = body.dump();
    const httplib::Headers headers{{"Authorization", "Bearer " + credential_}};
    std::string last_error;
    for (unsigned attempt = 0; attempt <= config_.retries; ++attempt) {
        if (attempt > 0 && config_.backoff_ms > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(config_.backoff_ms * attempt));
        }
        httplib::Result res{nullptr, httplib::Error::Unknown};
        {
            in_flight_.acquire();
            struct Release {
                std::counting_semaphore<1024>& s;
                ~Release() { s.release(); }
            } release{in_flight_};
            httplib::Client client(config_.endpoint);
            const auto t = std::chrono::milliseconds(config_.timeout_ms);
            client.set_connection_timeout(t);
            client.set_read_timeout(t);
            client.set_write_timeout(t);
            res = client.Post(path, headers, payload, "application/json");
        }
        if (!res) {
            last_error = "transport: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status == 429 || res->status >= 500) {
            last_error = "HTTP " + std::to_string(res->status);
            continue;
        }
        if (res->status < 200 || res->status >= 300) {
            throw Error(Errc::backend_fatal, path + " returned HTTP " + std::to_string(res->status));
        }
        try {
            return json::parse(res->body);
        } catch (const json::parse_error&) {
            throw Error(Errc::backend_fatal, path + " returned a non-JSON body");
        }
    }
    throw Error(Errc::backend_fatal,
                path + " failed after " + std::to_string(config_.retries + 1) + " tries (" + last_error + ")");
}

ImageRef HttpBackend::store_image(const json& reply) {
    try {
        const auto& item = reply.at("data").at(0);
        std::string id = "http-img-" + std::to_string(++images_);
        if (item.contains("b64_json")) {
            std::error_code ec;
            fs::create_directories(image_dir_, ec);
            auto path = image_dir_ / (id + ".png");
            write_text_file(path, base64_decode(item["b64_json"].get<std::string>()));
            return ImageRef{id, path.string(), std::nullopt};
        }
        return ImageRef{id, item.at("url").get<std::string>(), std::nullopt};
    } catch (const json::exception& e) {
        throw Error(Errc::backend_fatal, std::string("unexpected image reply: ") + e.what());
    }
}

ImageRef HttpBackend::generate_image(const std::string& prompt) {
    if (prompt.empty()) throw Error(Errc::backend_fatal, "empty prompt");
    return store_image(post(config_.image_path, {{"model", config_.model},
                                                 {"prompt", prompt},
                                                 {"n", 1},
                                                 {"response_format", "b64_json"}}));
}

ImageRef HttpBackend::refine_image(const ImageRef& image, const std::string& update_prompt) {
    if (update_prompt.empty()) throw Error(Errc::backend_fatal, "empty update prompt");
    return store_image(post(config_.edit_path, {{"model", config_.model},
                                                {"prompt", update_prompt},
                                                {"image", image_url(image)},
                                                {"n", 1},
                                                {"response_format", "b64_json"}}));
}

std::string HttpBackend::chat(const ImageRef* image, const std::string& prompt) {
    if (prompt.empty()) throw Error(Errc::backend_fatal, "empty prompt");
    json content = json::array({{{"type", "text"}, {"text", prompt}}});
    if (image != nullptr) content.push_back({{"type", "image_url"}, {"image_url", {{"url", image_url(*image)}}}});
    json body{{"model", config_.model}, {"messages", json::array({{{"role", "user"}, {"content", content}}})}};
    auto reply = post(config_.chat_path, body);
    try {
        return reply.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception& e) {
        throw Error(Errc::backend_fatal, std::string("unexpected chat reply: ") + e.what());
    }
}

std::vector<std::string> HttpBackend::extract_seed_words(const ImageRef& image, const std::string& prompt) {
    return parse_word_list_reply(chat(&image, prompt));
}

std::string HttpBackend::generate_text(const ImageRef* image, const std::string& prompt, TextPurpose) {
    return chat(image, prompt);
}

} // namespace dyco

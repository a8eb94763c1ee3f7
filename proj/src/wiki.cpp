#include "cutoffprobe/wiki.hpp"

#include <mutex>
#include <optional>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "cutoffprobe/error.hpp"
#include "cutoffprobe/parallel.hpp"

namespace cutoffprobe::wiki {

using nlohmann::json;

namespace {

bool starts_with_ci(std::string_view s, std::size_t pos, std::string_view prefix) {
    if (pos + prefix.size() > s.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        char a = s[pos + i];
        if (a >= 'A' && a <= 'Z') a = static_cast<char>(a - 'A' + 'a');
        if (a != prefix[i]) return false;
    }
    return true;
}

// Index just past the balanced `close` that matches the `open` at pos, or npos.
std::size_t skip_balanced(std::string_view s, std::size_t pos, std::string_view open, std::string_view close) {
    int depth = 0;
    std::size_t i = pos;
    while (i < s.size()) {
        if (s.compare(i, open.size(), open) == 0) {
            ++depth;
            i += open.size();
        } else if (s.compare(i, close.size(), close) == 0) {
            --depth;
            i += close.size();
            if (depth == 0) return i;
        } else {
            ++i;
        }
    }
    return std::string_view::npos;
}

std::string render_link(std::string_view inner) {
    for (std::string_view ns : {"file:", "image:", "category:"}) {
        if (starts_with_ci(inner, 0, ns)) return {};
    }
    const auto bar = inner.rfind('|');
    return std::string(bar == std::string_view::npos ? inner : inner.substr(bar + 1));
}

struct Split {
    std::string scheme_host;
    std::string path;
};

Split split_endpoint(const std::string& endpoint) {
    const auto scheme = endpoint.find("://");
    const auto slash = endpoint.find('/', scheme == std::string::npos ? 0 : scheme + 3);
    if (slash == std::string::npos) return {endpoint, "/"};
    return {endpoint.substr(0, slash), endpoint.substr(slash)};
}

}  // namespace

std::string clean_wikitext(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        if (s.compare(i, 4, "<!--") == 0) {
            const auto end = s.find("-->", i + 4);
            i = end == std::string_view::npos ? s.size() : end + 3;
        } else if (starts_with_ci(s, i, "<ref")) {
            const auto gt = s.find('>', i);
            if (gt == std::string_view::npos) break;
            if (s[gt - 1] == '/') {
                i = gt + 1;
            } else {
                std::size_t close = gt + 1;
                while (close < s.size() && !starts_with_ci(s, close, "</ref>")) ++close;
                i = std::min(s.size(), close + 6);
            }
        } else if (s.compare(i, 2, "{{") == 0) {
            const auto end = skip_balanced(s, i, "{{", "}}");
            i = end == std::string_view::npos ? s.size() : end;
        } else if (s.compare(i, 2, "{|") == 0) {
            const auto end = skip_balanced(s, i, "{|", "|}");
            i = end == std::string_view::npos ? s.size() : end;
        } else if (s.compare(i, 2, "[[") == 0) {
            const auto end = skip_balanced(s, i, "[[", "]]");
            if (end == std::string_view::npos) {
                i = s.size();
            } else {
                // nested links inside captions are cleaned recursively
                out += clean_wikitext(render_link(s.substr(i + 2, end - i - 4)));
                i = end;
            }
        } else if (s[i] == '[' && (starts_with_ci(s, i + 1, "http://") || starts_with_ci(s, i + 1, "https://"))) {
            const auto end = s.find(']', i);
            if (end == std::string_view::npos) {
                i = s.size();
            } else {
                const auto inner = s.substr(i + 1, end - i - 1);
                const auto sp = inner.find(' ');
                if (sp != std::string_view::npos) out += inner.substr(sp + 1);
                i = end + 1;
            }
        } else if (s.compare(i, 2, "''") == 0) {
            while (i < s.size() && s[i] == '\'') ++i;
        } else if (s[i] == '=' && (i == 0 || s[i - 1] == '\n')) {
            while (i < s.size() && s[i] == '=') ++i;
        } else if (s[i] == '=' && (i + 1 == s.size() || s[i + 1] == '=' || s[i + 1] == '\n')) {
            while (i < s.size() && s[i] == '=') ++i;
        } else {
            out.push_back(s[i]);
            ++i;
        }
    }
    // collapse runs of blank lines
    std::string tidy;
    tidy.reserve(out.size());
    int newlines = 0;
    for (char c : out) {
        if (c == '\n') {
            if (++newlines > 2) continue;
        } else {
            newlines = 0;
        }
        tidy.push_back(c);
    }
    const auto first = tidy.find_first_not_of(" \n\t");
    const auto last = tidy.find_last_not_of(" \n\t");
    if (first == std::string::npos) return {};
    return tidy.substr(first, last - first + 1);
}

QueryParams revision_query(std::string_view title, MonthStamp month) {
    return {
        {"action", "query"},
        {"format", "json"},
        {"formatversion", "2"},
        {"prop", "revisions"},
        {"titles", std::string(title)},
        {"rvprop", "content|timestamp"},
        {"rvslots", "main"},
        {"rvstart", month.str() + "-01T00:00:00Z"},
        {"rvdir", "older"},
        {"rvlimit", "1"},
    };
}

HttpGetter default_http_getter() {
    return [](const std::string& endpoint, const QueryParams& params) {
        const Split parts = split_endpoint(endpoint);
        httplib::Client client(parts.scheme_host);
        client.set_follow_location(true);
        client.set_connection_timeout(10);
        client.set_read_timeout(60);
        httplib::Params p(params.begin(), params.end());
        auto res = client.Get(parts.path, p, httplib::Headers{{"User-Agent", "cutoffprobe/0.3"}});
        if (!res) throw io_error("HTTP request to " + endpoint + " failed: " + httplib::to_string(res.error()));
        return HttpResult{res->status, res->body};
    };
}

namespace {

// The month's wikitext, or nullopt when the page has no revision at or before the boundary.
std::optional<std::string> fetch_one(const FetchOptions& opt, const HttpGetter& http, const std::string& title,
                                     MonthStamp month) {
    const auto params = revision_query(title, month);
    HttpResult res = with_retry(opt.retry, [&] {
        HttpResult r = http(opt.endpoint, params);
        if (r.status >= 500 || r.status == 429) {
            throw Error(ErrorKind::Io, "HTTP " + std::to_string(r.status) + " for '" + title + "'");
        }
        return r;
    });
    if (res.status != 200) {
        throw Error(ErrorKind::Io, "HTTP " + std::to_string(res.status) + " for '" + title + "': " + res.body);
    }
    json j = json::parse(res.body, nullptr, false);
    if (j.is_discarded()) throw Error(ErrorKind::Io, "non-JSON response for '" + title + "'");
    if (j.contains("error")) throw Error(ErrorKind::Io, "API error for '" + title + "': " + j["error"].dump());

    const json* page = nullptr;
    const auto& pages = j["query"]["pages"];
    if (pages.is_array() && !pages.empty()) {
        page = &pages[0];
    } else if (pages.is_object() && !pages.empty()) {
        page = &pages.begin().value();  // formatversion=1 keys pages by id
    }
    if (page == nullptr || page->contains("missing") || !page->contains("revisions") ||
        (*page)["revisions"].empty()) {
        return std::nullopt;
    }
    const json& rev = (*page)["revisions"][0];
    if (rev.contains("slots")) return rev["slots"]["main"].value("content", std::string{});
    if (rev.contains("content")) return rev["content"].get<std::string>();
    if (rev.contains("*")) return rev["*"].get<std::string>();
    return std::nullopt;
}

}  // namespace

TimeSpanCorpus fetch_revisions(const std::vector<std::string>& titles, MonthStamp first, MonthStamp last,
                               const FetchOptions& options) {
    if (last < first) throw config_error("fetch span ends before it starts");
    const HttpGetter http = options.http ? options.http : default_http_getter();
    const int months = span_length(first, last);

    std::vector<std::vector<VersionedDoc>> per_title(titles.size());
    std::vector<std::string> warnings(titles.size());
    parallel_for(titles.size(), options.jobs, [&](std::size_t t) {
        std::vector<VersionedDoc> versions;
        try {
            for (int k = 0; k < months; ++k) {
                const MonthStamp m = first.plus(k);
                auto text = fetch_one(options, http, titles[t], m);
                std::string cleaned = text ? options.cleaner(*text) : std::string{};
                if (cleaned.empty()) {
                    warnings[t] = "dropping topic '" + titles[t] + "': no revision at or before " + m.str();
                    return;
                }
                versions.push_back({titles[t], m, std::move(cleaned)});
            }
        } catch (const std::exception& e) {
            warnings[t] = "dropping topic '" + titles[t] + "': " + e.what();
            return;
        }
        per_title[t] = std::move(versions);
    });

    std::vector<VersionedDoc> docs;
    for (std::size_t t = 0; t < titles.size(); ++t) {
        if (!warnings[t].empty()) {
            if (options.warn) options.warn(warnings[t]);
            continue;
        }
        for (auto& d : per_title[t]) docs.push_back(std::move(d));
    }
    return TimeSpanCorpus::from_docs(std::move(docs));
}

}  // namespace cutoffprobe::wiki

#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cutoffprobe/corpus.hpp"
#include "cutoffprobe/retry.hpp"

namespace cutoffprobe::wiki {

inline constexpr std::string_view kDefaultEndpoint = "https://en.wikipedia.org/w/api.php";

struct HttpResult {
    int status = 0;
    std::string body;
};

using QueryParams = std::vector<std::pair<std::string, std::string>>;
/// GET `endpoint` with URL-encoded `params`. Throws on transport failure.
using HttpGetter = std::function<HttpResult(const std::string& endpoint, const QueryParams& params)>;
using Cleaner = std::function<std::string(std::string_view)>;

HttpGetter default_http_getter();

/// Default wikitext to plain text: drops templates, tables, comments, reference tags and
/// file/category links; keeps link labels and heading text.
std::string clean_wikitext(std::string_view wikitext);

/// Request parameters for the latest revision at or before 00:00 UTC on the first of `month`.
QueryParams revision_query(std::string_view title, MonthStamp month);

struct FetchOptions {
    std::string endpoint{kDefaultEndpoint};
    Cleaner cleaner = clean_wikitext;
    HttpGetter http;  // defaults to default_http_getter()
    RetryPolicy retry;
    std::size_t jobs = 4;
    std::function<void(const std::string&)> warn;
};

/// One version per title per month in [first, last]. Titles lacking a revision for any month
/// (or whose fetch fails after retries) are dropped and reported through options.warn, so the
/// result always satisfies the complete-grid invariant.
TimeSpanCorpus fetch_revisions(const std::vector<std::string>& titles, MonthStamp first, MonthStamp last,
                               const FetchOptions& options);

}  // namespace cutoffprobe::wiki

#include "overlay.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "cutoffprobe/error.hpp"
#include "cutoffprobe/io.hpp"

namespace cutoffprobe::cli {

std::string env_name(std::string_view flag) {
    std::string out(kEnvPrefix);
    for (char c : flag) out += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

namespace {

bool on_command_line(const std::vector<std::string>& args, std::size_t from, const std::string& flag) {
    const std::string eq = flag + "=";
    return std::any_of(args.begin() + static_cast<std::ptrdiff_t>(from), args.end(),
                       [&](const std::string& a) { return a == flag || a.rfind(eq, 0) == 0; });
}

std::string scalar_text(const nlohmann::json& v, const std::string& key) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number() || v.is_boolean()) return v.dump();
    throw config_error("config key '" + key + "' must be a string, number, boolean or list of those");
}

}  // namespace

std::vector<std::string> apply_config_overlay(const CLI::App& app, std::vector<std::string> args,
                                              const EnvLookup& getenv) {
    std::size_t sub_pos = args.size();
    const CLI::App* sub = nullptr;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if ((sub = app.get_subcommand_no_throw(args[i])) != nullptr) {
            sub_pos = i;
            break;
        }
    }
    if (sub == nullptr) return args;

    std::string config_path;
    for (std::size_t i = sub_pos + 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
    }
    if (config_path.empty()) {
        if (const char* env = getenv(env_name("config").c_str())) config_path = env;
    }
    if (config_path.empty()) return args;

    const auto doc = nlohmann::json::parse(io::read_file(config_path), nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) throw config_error(config_path + ": config must be a JSON object");

    std::map<std::string, nlohmann::json> values;
    for (const auto& [k, v] : doc.items()) {
        if (!v.is_object()) values[k] = v;
    }
    if (doc.contains(sub->get_name()) && doc[sub->get_name()].is_object()) {
        for (const auto& [k, v] : doc[sub->get_name()].items()) values[k] = v;
    }

    std::vector<std::string> extra;
    for (auto& [raw_key, v] : values) {
        const std::string key = raw_key.rfind("--", 0) == 0 ? raw_key.substr(2) : raw_key;
        const std::string flag = "--" + key;
        const CLI::Option* opt = sub->get_option_no_throw(flag);
        if (opt == nullptr || key == "config" || key == "help") {
            throw config_error(config_path + ": unknown key '" + raw_key + "' for " + sub->get_name());
        }
        if (on_command_line(args, sub_pos + 1, flag) || getenv(env_name(key).c_str()) != nullptr) continue;
        if (v.is_null()) continue;
        if (opt->get_type_size() == 0) {
            if (!v.is_boolean()) throw config_error(config_path + ": '" + raw_key + "' must be true or false");
            if (v.get<bool>()) extra.push_back(flag);
            continue;
        }
        std::string text;
        if (v.is_array()) {
            for (const auto& item : v) text += (text.empty() ? "" : ",") + scalar_text(item, raw_key);
        } else {
            text = scalar_text(v, raw_key);
        }
        extra.push_back(flag + "=" + text);
    }
    args.insert(args.begin() + static_cast<std::ptrdiff_t>(sub_pos) + 1, extra.begin(), extra.end());
    return args;
}

nlohmann::ordered_json effective_config(const CLI::App& sub, const std::set<std::string>& exclude) {
    std::map<std::string, std::string> values;
    for (const CLI::Option* opt : sub.get_options()) {
        if (opt->get_lnames().empty()) continue;
        const std::string& name = opt->get_lnames().front();
        if (name == "help" || exclude.count(name)) continue;
        if (opt->count() > 0) {
            std::string joined;
            for (const auto& r : opt->results()) joined += (joined.empty() ? "" : ",") + r;
            values[name] = joined;
        } else if (!opt->get_default_str().empty()) {
            values[name] = opt->get_default_str();
        }
    }
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [k, v] : values) j[k] = v;
    return j;
}

}  // namespace cutoffprobe::cli

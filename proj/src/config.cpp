#include "rtz/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "rtz/errors.hpp"

namespace rtz {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <class T>
T parse_number(std::string_view value, const std::string& key, std::string_view source, int line) {
    T out{};
    const auto* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc{} || ptr != end)
        throw ConfigError(fmt::format("{}:{}: field '{}': cannot parse '{}'", source, line, key, value), key, line);
    return out;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text, std::string_view source) {
    ExperimentConfig config;
    std::map<std::string, int> seen;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string_view body = raw;
        if (const auto hash = body.find('#'); hash != std::string_view::npos)
            body = body.substr(0, hash);
        body = trim(body);
        if (body.empty())
            continue;
        const auto eq = body.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(fmt::format("{}:{}: expected 'key = value', got '{}'", source, line, body), "", line);
        const std::string key(trim(body.substr(0, eq)));
        const std::string_view value = trim(body.substr(eq + 1));
        if (value.empty())
            throw ConfigError(fmt::format("{}:{}: field '{}' has no value", source, line, key), key, line);
        if (auto [it, inserted] = seen.emplace(key, line); !inserted)
            throw ConfigError(
                fmt::format("{}:{}: field '{}' already set on line {}", source, line, key, it->second), key, line);

        try {
            if (key == "gamma")
                config.gamma = parse_number<double>(value, key, source, line);
            else if (key == "slow")
                config.slow = SlowVariation::parse(value);
            else if (key == "law")
                config.law = parse_law(value);
            else if (key == "q")
                config.q = parse_number<double>(value, key, source, line);
            else if (key == "n_min")
                config.n_min = parse_number<int>(value, key, source, line);
            else if (key == "n_max")
                config.n_max = parse_number<int>(value, key, source, line);
            else if (key == "trials")
                config.trials = parse_number<std::size_t>(value, key, source, line);
            else if (key == "delta")
                config.delta = parse_number<double>(value, key, source, line);
            else if (key == "eta")
                config.eta = parse_number<double>(value, key, source, line);
            else if (key == "master_seed")
                config.master_seed = parse_number<std::uint64_t>(value, key, source, line);
            else if (key == "cumulative_n_min")
                config.cumulative_n_min = parse_number<int>(value, key, source, line);
            else if (key == "cumulative_n_max")
                config.cumulative_n_max = parse_number<int>(value, key, source, line);
            else
                throw ConfigError(fmt::format("{}:{}: unknown field '{}'", source, line, key), key, line);
        } catch (const DomainError& e) {
            throw ConfigError(fmt::format("{}:{}: field '{}': {}", source, line, key, e.what()), key, line);
        }
    }

    try {
        config.validate();
    } catch (const ConfigError& e) {
        const auto it = seen.find(e.field());
        const int at = it == seen.end() ? 0 : it->second;
        const std::string where = at ? fmt::format("{}:{}", source, at) : std::string(source);
        throw ConfigError(fmt::format("{}: field '{}' invalid ({})", where, e.field(), e.what()), e.field(), at);
    }
    return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError(fmt::format("cannot open config file '{}'", path.string()), "config");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), path.string());
}

std::string format_config(const ExperimentConfig& c) {
    return fmt::format(
        "gamma = {}\nslow = {}\nlaw = {}\nq = {}\nn_min = {}\nn_max = {}\ntrials = {}\n"
        "delta = {}\neta = {}\nmaster_seed = {}\ncumulative_n_min = {}\ncumulative_n_max = {}\n",
        c.gamma, c.slow.to_string(), to_string(c.law), c.q, c.n_min, c.n_max, c.trials, c.delta, c.eta,
        c.master_seed, c.cumulative_n_min, c.cumulative_n_max);
}

}  // namespace rtz

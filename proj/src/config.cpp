#include "magnoent/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <set>

#include "magnoent/errors.hpp"

namespace magnoent {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

bool ends_with(std::string_view s, std::string_view suffix)
{
    return s.size() > suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

void drop_link(std::vector<ParamLink>& links, std::string_view target)
{
    std::erase_if(links, [&](const ParamLink& l) { return l.target == target; });
}

double link_value(const SystemParams& p, const std::vector<ParamLink>& links,
                  const std::string& field, std::set<std::string>& visiting,
                  SystemParams& out)
{
    const auto it = std::find_if(links.begin(), links.end(),
                                 [&](const ParamLink& l) { return l.target == field; });
    const ParamField* f = find_param_field(field);
    if (f == nullptr) {
        throw ConfigError("link refers to unknown parameter '" + field + "'");
    }
    if (it == links.end()) {
        return p.*(f->member);
    }
    if (!visiting.insert(field).second) {
        throw ConfigError("parameter links form a cycle through '" + field + "'");
    }
    const double v = it->factor * link_value(p, links, it->source, visiting, out);
    visiting.erase(field);
    out.*(f->member) = v;
    return v;
}

} // namespace

double parse_number(std::string_view text, std::string_view what)
{
    const auto t = trim(text);
    // from_chars rejects a leading '+', which config authors do write.
    const auto body = (!t.empty() && t.front() == '+') ? t.substr(1) : t;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), v);
    if (body.empty() || ec != std::errc() || ptr != body.data() + body.size()) {
        throw ConfigError(std::string(what) + ": cannot parse '" + std::string(t) + "' as a number");
    }
    return v;
}

std::vector<std::string> split_trimmed(std::string_view text, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        out.emplace_back(trim(text.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return out;
}

std::vector<KeyValue> parse_key_values(std::istream& in, std::string_view source)
{
    std::vector<KeyValue> out;
    std::set<std::string> seen;
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        const std::string where = std::string(source) + ":" + std::to_string(lineno);
        if (eq == std::string_view::npos) {
            throw ConfigError(where + ": expected 'key = value'");
        }
        KeyValue kv{std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))), lineno};
        if (kv.key.empty() || kv.value.empty()) {
            throw ConfigError(where + ": empty key or value");
        }
        if (!seen.insert(kv.key).second) {
            throw ConfigError(where + ": duplicate key '" + kv.key + "'");
        }
        out.push_back(std::move(kv));
    }
    return out;
}

std::vector<KeyValue> read_key_values(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path.string() + "'");
    }
    return parse_key_values(in, path.string());
}

bool ParamConfig::assign(const std::string& key, const std::string& value)
{
    if (const ParamField* f = find_param_field(key)) {
        const auto parts = split_trimmed(value, '*');
        if (parts.size() == 2) {
            const ParamField* src = find_param_field(parts[1]);
            if (src == nullptr) {
                throw ConfigError(key + ": unknown link source '" + parts[1] + "'");
            }
            if (src->quantity != f->quantity) {
                throw ConfigError(key + ": cannot link to '" + parts[1] + "' of a different quantity");
            }
            drop_link(links, key);
            links.push_back({key, parse_number(parts[0], key), parts[1]});
            return true;
        }
        values.*(f->member) = parse_number(value, key);
        drop_link(links, key);
        return true;
    }

    const auto with_suffix = [&](std::string_view suffix, Quantity q, double scale) {
        if (!ends_with(key, suffix)) {
            return false;
        }
        const std::string base = key.substr(0, key.size() - suffix.size());
        const ParamField* f = find_param_field(base);
        if (f == nullptr || f->quantity != q) {
            return false;
        }
        values.*(f->member) = scale * parse_number(value, key);
        drop_link(links, base);
        return true;
    };
    return with_suffix("_hz", Quantity::Frequency, constants::two_pi)
           || with_suffix("_k", Quantity::Temperature, 1.0);
}

void apply_links(SystemParams& p, const std::vector<ParamLink>& links)
{
    const SystemParams in = p;
    for (const auto& l : links) {
        std::set<std::string> visiting;
        link_value(in, links, l.target, visiting, p);
    }
}

SystemParams ParamConfig::resolved() const
{
    SystemParams p = values;
    apply_links(p, links);
    p.validate();
    return p;
}

ParamConfig param_config_from(const std::vector<KeyValue>& kvs)
{
    ParamConfig cfg;
    for (const auto& kv : kvs) {
        if (!cfg.assign(kv.key, kv.value)) {
            throw ConfigError("line " + std::to_string(kv.line) + ": unknown key '" + kv.key + "'");
        }
    }
    return cfg;
}

ParamConfig load_param_config(const std::filesystem::path& path)
{
    return param_config_from(read_key_values(path));
}

} // namespace magnoent

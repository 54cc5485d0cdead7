#include "sgmine/eventlog.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "sgmine/errors.hpp"

namespace sgmine {

void EventLog::add(const Trace& trace, std::uint64_t multiplicity) {
    if (multiplicity == 0) return;
    for (const auto& a : trace.actions) {
        if (a.empty()) throw DomainError("action names must be non-empty");
        if (a.find_first_of(";,\n\r") != std::string::npos)
            throw DomainError("action name contains a reserved separator: '" + a + "'");
    }
    variants_[trace] += multiplicity;
    total_ += multiplicity;
    for (const auto& a : trace.actions) alphabet_.insert(a);
}

std::uint64_t EventLog::multiplicity(const Trace& t) const {
    auto it = variants_.find(t);
    return it == variants_.end() ? 0 : it->second;
}

namespace {

std::uint64_t parse_count(const std::string& field, std::size_t line_no) {
    std::uint64_t value = 0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw ParseError("line " + std::to_string(line_no) +
                         ": multiplicity is not a positive integer: '" + field + "'");
    if (value == 0)
        throw ParseError("line " + std::to_string(line_no) + ": multiplicity must be >= 1");
    return value;
}

Trace parse_actions(const std::string& rest, std::size_t line_no) {
    Trace t;
    if (rest.empty()) return t; // the empty trace
    std::size_t start = 0;
    while (true) {
        std::size_t comma = rest.find(',', start);
        std::string name = rest.substr(start, comma == std::string::npos ? std::string::npos
                                                                         : comma - start);
        if (name.empty())
            throw ParseError("line " + std::to_string(line_no) + ": empty action name");
        t.actions.push_back(std::move(name));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return t;
}

} // namespace

EventLog parse_log(const std::string& text) {
    EventLog log;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string line = text.substr(pos, eol == std::string::npos ? std::string::npos
                                                                     : eol - pos);
        pos = eol == std::string::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::size_t sep = line.find(';');
        if (sep == std::string::npos)
            throw ParseError("line " + std::to_string(line_no) + ": missing ';' separator");
        std::uint64_t mult = parse_count(line.substr(0, sep), line_no);
        log.add(parse_actions(line.substr(sep + 1), line_no), mult);
    }
    return log;
}

std::string serialize_log(const EventLog& log) {
    std::ostringstream out;
    for (const auto& [trace, mult] : log.variants()) {
        out << mult << ';';
        for (std::size_t i = 0; i < trace.actions.size(); ++i) {
            if (i > 0) out << ',';
            out << trace.actions[i];
        }
        out << '\n';
    }
    return out.str();
}

namespace {

// Just enough XML to read the XES subset: tags, attributes, comments and
// processing instructions. No DTDs, no namespaces, no CDATA.
struct XmlCursor {
    const std::string& text;
    std::size_t pos = 0;

    explicit XmlCursor(const std::string& t) : text(t) {}

    struct Tag {
        std::string name;
        std::map<std::string, std::string> attrs;
        bool closing = false;
        bool self_closing = false;
    };

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    // Advances to the next tag; returns false at end of input.
    bool next_tag(Tag& tag) {
        while (true) {
            std::size_t lt = text.find('<', pos);
            if (lt == std::string::npos) return false;
            pos = lt + 1;
            if (text.compare(pos, 3, "!--") == 0) {
                std::size_t end = text.find("-->", pos);
                if (end == std::string::npos) throw ParseError("unterminated XML comment");
                pos = end + 3;
                continue;
            }
            if (pos < text.size() && text[pos] == '?') {
                std::size_t end = text.find("?>", pos);
                if (end == std::string::npos) throw ParseError("unterminated XML declaration");
                pos = end + 2;
                continue;
            }
            if (pos < text.size() && text[pos] == '!') { // DOCTYPE and friends
                std::size_t end = text.find('>', pos);
                if (end == std::string::npos) throw ParseError("unterminated '<!' section");
                pos = end + 1;
                continue;
            }
            break;
        }
        tag = Tag{};
        if (pos < text.size() && text[pos] == '/') {
            tag.closing = true;
            ++pos;
        }
        std::size_t name_start = pos;
        while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
               text[pos] != '>' && text[pos] != '/')
            ++pos;
        tag.name = text.substr(name_start, pos - name_start);
        if (tag.name.empty()) throw ParseError("malformed XML tag");
        while (true) {
            skip_ws();
            if (pos >= text.size()) throw ParseError("unterminated XML tag <" + tag.name + ">");
            if (text[pos] == '>') {
                ++pos;
                return true;
            }
            if (text[pos] == '/') {
                if (pos + 1 >= text.size() || text[pos + 1] != '>')
                    throw ParseError("malformed XML tag <" + tag.name + ">");
                tag.self_closing = true;
                pos += 2;
                return true;
            }
            std::size_t eq = text.find('=', pos);
            if (eq == std::string::npos) throw ParseError("malformed attribute in <" + tag.name + ">");
            std::string key = text.substr(pos, eq - pos);
            while (!key.empty() && std::isspace(static_cast<unsigned char>(key.back()))) key.pop_back();
            pos = eq + 1;
            skip_ws();
            if (pos >= text.size() || (text[pos] != '"' && text[pos] != '\''))
                throw ParseError("unquoted attribute value in <" + tag.name + ">");
            char quote = text[pos];
            std::size_t val_end = text.find(quote, pos + 1);
            if (val_end == std::string::npos)
                throw ParseError("unterminated attribute value in <" + tag.name + ">");
            tag.attrs[key] = decode_entities(text.substr(pos + 1, val_end - pos - 1));
            pos = val_end + 1;
        }
    }

    static std::string decode_entities(const std::string& s) {
        std::string out;
        out.reserve(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] != '&') {
                out.push_back(s[i]);
                continue;
            }
            std::size_t semi = s.find(';', i);
            std::string ent = semi == std::string::npos ? "" : s.substr(i + 1, semi - i - 1);
            if (ent == "amp") out.push_back('&');
            else if (ent == "lt") out.push_back('<');
            else if (ent == "gt") out.push_back('>');
            else if (ent == "quot") out.push_back('"');
            else if (ent == "apos") out.push_back('\'');
            else throw ParseError("unknown XML entity '&" + ent + ";'");
            i = semi;
        }
        return out;
    }
};

} // namespace

EventLog parse_xes(const std::string& text) {
    XmlCursor cur(text);
    XmlCursor::Tag tag;
    EventLog log;

    std::vector<std::string> stack;
    Trace current;
    bool in_trace = false;
    bool in_event = false;
    bool event_named = false;

    while (cur.next_tag(tag)) {
        if (tag.closing) {
            if (stack.empty() || stack.back() != tag.name)
                throw ParseError("mismatched closing tag </" + tag.name + ">");
            stack.pop_back();
            if (tag.name == "event") {
                if (!event_named) throw ParseError("event missing concept:name");
                in_event = false;
            } else if (tag.name == "trace") {
                log.add(current, 1);
                in_trace = false;
            }
            continue;
        }
        if (tag.name == "trace" && !tag.self_closing) {
            current = Trace{};
            in_trace = true;
        } else if (tag.name == "event" && in_trace) {
            if (tag.self_closing) throw ParseError("event missing concept:name");
            in_event = true;
            event_named = false;
        } else if (tag.name == "string" && in_event) {
            auto key = tag.attrs.find("key");
            if (key != tag.attrs.end() && key->second == "concept:name") {
                auto value = tag.attrs.find("value");
                if (value == tag.attrs.end())
                    throw ParseError("concept:name attribute without value");
                current.actions.push_back(value->second);
                event_named = true;
            }
        } else if (tag.name == "trace" && tag.self_closing) {
            log.add(Trace{}, 1); // a trace with no events is the empty trace
        }
        if (!tag.self_closing) stack.push_back(tag.name);
    }
    if (!stack.empty()) throw ParseError("unclosed XML tag <" + stack.back() + ">");
    return log;
}

EmpiricalDistribution empirical_distribution(const EventLog& log) {
    if (log.empty()) throw DomainError("empirical distribution of an empty log");
    EmpiricalDistribution dist;
    const double total = static_cast<double>(log.total_traces());
    for (const auto& [trace, mult] : log.variants())
        dist.probs[trace] = static_cast<double>(mult) / total;
    return dist;
}

EventLog filter_by_frequency(const EventLog& log, double f) {
    if (log.empty()) throw DomainError("cannot filter an empty log");
    if (f <= 0.0) return log;

    std::vector<std::pair<Trace, std::uint64_t>> order(log.variants().begin(),
                                                       log.variants().end());
    std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    const double threshold = f * static_cast<double>(log.total_traces());
    EventLog out;
    std::uint64_t cumulative = 0;
    for (const auto& [trace, mult] : order) {
        out.add(trace, mult);
        cumulative += mult;
        if (static_cast<double>(cumulative) >= threshold) break;
    }
    return out;
}

} // namespace sgmine

#include "paytv/model.hpp"

#include <sstream>

namespace paytv {

const char* scheme_name(Scheme s) { return s == Scheme::Chen ? "chen" : "improved"; }

const char* phase_name(Phase p) {
    switch (p) {
        case Phase::Registration: return "registration";
        case Phase::Issue: return "issue";
        case Phase::Subscription: return "subscription";
        case Phase::Handoff: return "handoff";
    }
    return "?";
}

const char* dir_name(Dir d) { return d == Dir::ToServer ? ">" : "<"; }

Phase phase_from_name(const std::string& name) {
    if (name == "registration") return Phase::Registration;
    if (name == "issue") return Phase::Issue;
    if (name == "subscription") return Phase::Subscription;
    if (name == "handoff") return Phase::Handoff;
    fail(Err::MalformedMessage, "unknown phase: " + name);
}

Scheme scheme_from_name(const std::string& name) {
    if (name == "chen") return Scheme::Chen;
    if (name == "improved") return Scheme::Improved;
    fail(Err::MalformedMessage, "unknown scheme: " + name);
}

const Word& Message::field(const std::string& name) const {
    for (const auto& [n, w] : fields)
        if (n == name) return w;
    fail(Err::MalformedMessage, "missing field " + name + " in " + phase_name(phase) + " message");
}

bool Message::has(const std::string& name) const {
    for (const auto& [n, w] : fields)
        if (n == name) return true;
    return false;
}

std::string Message::serialize() const {
    std::ostringstream out;
    out << scheme_name(scheme) << ' ' << phase_name(phase) << ' ' << dir_name(dir) << ' ' << sent_at;
    for (const auto& [n, w] : fields)
        out << ' ' << n << '=' << w.hex();
    return out.str();
}

Message Message::parse(const std::string& line) {
    std::istringstream in(line);
    std::string scheme, phase, dir;
    Ticks tick;
    if (!(in >> scheme >> phase >> dir >> tick))
        fail(Err::MalformedMessage, "truncated transcript line");
    Message m;
    m.scheme = scheme_from_name(scheme);
    m.phase = phase_from_name(phase);
    m.dir = dir == ">" ? Dir::ToServer : Dir::ToUser;
    m.sent_at = tick;
    std::string tok;
    while (in >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos)
            fail(Err::MalformedMessage, "bad field token: " + tok);
        m.fields.emplace_back(tok.substr(0, eq), Word::from_hex(tok.substr(eq + 1)));
    }
    return m;
}

std::string Transcript::serialize() const {
    std::string out;
    for (const auto& m : entries) {
        out += m.serialize();
        out += '\n';
    }
    return out;
}

Transcript Transcript::parse(const std::string& text) {
    Transcript t;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        t.entries.push_back(Message::parse(line));
    }
    return t;
}

void channel_send(World& w, Message msg) {
    msg.sent_at = w.clock.now();
    w.transcript.entries.push_back(std::move(msg));
    w.clock.advance(1);
}

} // namespace paytv

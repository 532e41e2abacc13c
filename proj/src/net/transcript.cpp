#include "panini/net/transcript.hpp"

#include <sstream>

namespace panini::net {

std::string_view to_string(Channel c) { return c == Channel::Auth ? "auth" : "anon"; }

nlohmann::json TranscriptEvent::to_json() const {
  nlohmann::json j = data;
  j["tick"] = tick;
  j["event"] = kind;
  return j;
}

TranscriptEvent TranscriptEvent::from_json(const nlohmann::json& j) {
  TranscriptEvent e;
  e.tick = j.at("tick").get<Tick>();
  e.kind = j.at("event").get<std::string>();
  e.data = j;
  e.data.erase("tick");
  e.data.erase("event");
  return e;
}

std::string to_jsonl(const Transcript& t) {
  std::string out;
  for (const auto& e : t) {
    out += e.to_json().dump();
    out += '\n';
  }
  return out;
}

Transcript from_jsonl(const std::string& text) {
  Transcript t;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    t.push_back(TranscriptEvent::from_json(nlohmann::json::parse(line)));
  }
  return t;
}

std::vector<const TranscriptEvent*> events_of(const Transcript& t, std::string_view kind) {
  std::vector<const TranscriptEvent*> out;
  for (const auto& e : t)
    if (e.kind == kind) out.push_back(&e);
  return out;
}

}  // namespace panini::net

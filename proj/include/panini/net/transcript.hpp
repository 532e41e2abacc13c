#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "panini/net/types.hpp"

namespace panini::net {

/// One observer-visible event. data holds the event's metadata fields.
struct TranscriptEvent {
  Tick tick = 0;
  std::string kind;
  nlohmann::json data = nlohmann::json::object();

  nlohmann::json to_json() const;
  static TranscriptEvent from_json(const nlohmann::json& j);

  friend bool operator==(const TranscriptEvent&, const TranscriptEvent&) = default;
};

using Transcript = std::vector<TranscriptEvent>;

/// Line-delimited JSON, one event per line, keys in sorted order.
std::string to_jsonl(const Transcript& t);
Transcript from_jsonl(const std::string& text);

/// Events of the given kind, in order.
std::vector<const TranscriptEvent*> events_of(const Transcript& t, std::string_view kind);

}  // namespace panini::net

#include "procstory/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include <json.hpp>

#include "procstory/error.hpp"
#include "procstory/text.hpp"

namespace procstory {

using nlohmann::json;

const Participant* AnnotatedStory::find_participant(const std::string& surface) const {
  for (const Participant& p : participants) {
    if (p.surface == surface) return &p;
  }
  return nullptr;
}

void refresh_mentions(AnnotatedStory& story) {
  for (Participant& p : story.participants) {
    p.mentions.clear();
    for (const Sentence& s : story.sentences) {
      for (auto [begin, end] : find_phrase(s.text, p.surface)) {
        p.mentions.push_back({s.index, begin, end});
      }
    }
  }
}

namespace {

json story_to_json(const AnnotatedStory& story) {
  json sentences = json::array();
  for (const Sentence& s : story.sentences) sentences.push_back(s.text);

  json participants = json::array();
  for (const Participant& p : story.participants) {
    participants.push_back({{"surface", p.surface}, {"is_human", p.is_human}});
  }

  json annotations = json::array();
  for (const StateAnnotation& a : story.annotations) {
    annotations.push_back({{"participant", a.participant},
                           {"step", a.step},
                           {"attribute", a.attribute},
                           {"precondition", a.precondition},
                           {"effect", a.effect}});
  }

  json record = {{"sentences", sentences},
                 {"participants", participants},
                 {"annotations", annotations}};
  record["conflict"] =
      story.conflict ? json::array({story.conflict->first, story.conflict->second})
                     : json(nullptr);
  record["label"] = story.label ? json(*story.label) : json(nullptr);
  return record;
}

AnnotatedStory story_from_json(const json& record) {
  AnnotatedStory story;
  int index = 0;
  for (const json& s : record.at("sentences")) {
    story.sentences.push_back({index++, s.get<std::string>()});
  }
  for (const json& p : record.at("participants")) {
    Participant participant;
    participant.surface = to_lower(trim(p.at("surface").get<std::string>()));
    participant.is_human = p.value("is_human", false);
    story.participants.push_back(std::move(participant));
  }
  for (const json& a : record.value("annotations", json::array())) {
    story.annotations.push_back({a.at("participant").get<std::string>(),
                                 a.at("step").get<int>(),
                                 a.at("attribute").get<std::string>(),
                                 a.at("precondition").get<std::string>(),
                                 a.at("effect").get<std::string>()});
  }
  if (record.contains("conflict") && !record["conflict"].is_null()) {
    const json& c = record["conflict"];
    story.conflict = ConflictPair{c.at(0).get<int>(), c.at(1).get<int>()};
  }
  if (record.contains("label") && !record["label"].is_null()) {
    story.label = record["label"].get<int>();
  }
  refresh_mentions(story);
  return story;
}

void validate_story(const AnnotatedStory& story, const AttributeSchema& schema,
                    const std::string& prefix, std::vector<Violation>& out) {
  if (story.sentences.empty()) {
    out.push_back({prefix + "sentences", "story has no sentences"});
  }
  for (const Sentence& s : story.sentences) {
    if (trim(s.text).empty()) {
      out.push_back({prefix + "sentences[" + std::to_string(s.index) + "]",
                     "sentence text is empty"});
    }
  }
  for (std::size_t i = 0; i < story.sentences.size(); ++i) {
    if (story.sentences[i].index != static_cast<int>(i)) {
      out.push_back({prefix + "sentences", "sentence indices not contiguous from 0"});
      break;
    }
  }

  std::set<std::string> surfaces;
  for (const Participant& p : story.participants) {
    if (p.surface.empty()) {
      out.push_back({prefix + "participants", "participant surface is empty"});
      continue;
    }
    if (p.surface != to_lower(p.surface)) {
      out.push_back({prefix + "participants",
                     "participant surface not lowercase-normalized: " + p.surface});
    }
    if (!surfaces.insert(p.surface).second) {
      out.push_back({prefix + "participants", "duplicate participant: " + p.surface});
    }
    for (const Mention& m : p.mentions) {
      if (m.sentence < 0 || m.sentence >= story.step_count() ||
          m.end > story.sentences[static_cast<std::size_t>(m.sentence)].text.size() ||
          m.begin >= m.end) {
        out.push_back({prefix + "participants", "mention span outside sentence for " + p.surface});
      }
    }
  }

  std::set<std::tuple<std::string, int, std::string>> triples;
  for (std::size_t i = 0; i < story.annotations.size(); ++i) {
    const StateAnnotation& a = story.annotations[i];
    const std::string field = prefix + "annotations[" + std::to_string(i) + "]";
    if (!surfaces.count(a.participant)) {
      out.push_back({field, "annotation references unlisted participant: " + a.participant});
    }
    if (a.step < 0 || a.step >= story.step_count()) {
      out.push_back({field, "annotation step out of range: " + std::to_string(a.step)});
    }
    int attr = schema.index_of(a.attribute);
    if (attr < 0) {
      out.push_back({field, "unknown attribute: " + a.attribute});
    } else {
      if (schema.precondition_label_index(attr, a.precondition) < 0) {
        out.push_back({field, "precondition label outside schema space: " + a.precondition});
      }
      if (schema.effect_label_index(attr, a.effect) < 0) {
        out.push_back({field, "effect label outside schema space: " + a.effect});
      }
    }
    if (!triples.insert({a.participant, a.step, a.attribute}).second) {
      out.push_back({field, "duplicate annotation for (" + a.participant + ", " +
                                std::to_string(a.step) + ", " + a.attribute + ")"});
    }
  }

  if (story.conflict) {
    if (story.conflict->first >= story.conflict->second) {
      out.push_back({prefix + "conflict", "first < second required"});
    }
    if (story.conflict->first < 0 || story.conflict->second >= story.step_count()) {
      out.push_back({prefix + "conflict", "conflict indices out of range"});
    }
    if (story.label && *story.label == kPlausible) {
      out.push_back({prefix + "conflict", "story with a conflict pair cannot be plausible"});
    }
  }
}

}  // namespace

std::vector<Violation> validate_story_pair(const StoryPair& pair,
                                           const AttributeSchema& schema,
                                           const ValidateOptions& options) {
  std::vector<Violation> out;
  if (pair.pair_id.empty()) out.push_back({"pair_id", "pair id is empty"});
  validate_story(pair.plausible, schema, "plausible.", out);
  validate_story(pair.implausible, schema, "implausible.", out);

  if (!pair.plausible.label || *pair.plausible.label != kPlausible) {
    out.push_back({"plausible.label", "plausible story must carry label 1"});
  }
  if (!pair.implausible.label || *pair.implausible.label != kImplausible) {
    out.push_back({"implausible.label", "implausible story must carry label 0"});
  }
  if (options.require_conflict && !pair.implausible.conflict) {
    out.push_back({"implausible.conflict", "conflict pair required"});
  }
  return out;
}

StoryPair story_pair_from_json_line(const std::string& line) {
  json record = json::parse(line);
  StoryPair pair;
  pair.pair_id = record.at("pair_id").get<std::string>();
  pair.plausible = story_from_json(record.at("plausible"));
  pair.implausible = story_from_json(record.at("implausible"));
  return pair;
}

std::string story_pair_to_json_line(const StoryPair& pair) {
  json record = {{"pair_id", pair.pair_id},
                 {"plausible", story_to_json(pair.plausible)},
                 {"implausible", story_to_json(pair.implausible)}};
  return record.dump();
}

std::vector<StoryPair> load_dataset(const std::string& path,
                                    const AttributeSchema& schema,
                                    const ValidateOptions& options) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open dataset file: " + path);

  std::vector<StoryPair> pairs;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (trim(line).empty()) continue;
    StoryPair pair;
    try {
      pair = story_pair_from_json_line(line);
    } catch (const json::exception& e) {
      throw ParseError(std::string("malformed story pair record: ") + e.what(), line_number);
    }
    std::vector<Violation> violations = validate_story_pair(pair, schema, options);
    if (!violations.empty()) {
      throw ValidationError("pair '" + pair.pair_id + "' field '" + violations[0].field +
                            "': " + violations[0].message);
    }
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

void save_dataset(const std::vector<StoryPair>& pairs, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write dataset file: " + path);
  for (const StoryPair& pair : pairs) {
    out << story_pair_to_json_line(pair) << "\n";
  }
  if (!out) throw ConfigError("write failed: " + path);
}

bool story_pair_equal(const StoryPair& a, const StoryPair& b) {
  return story_pair_to_json_line(a) == story_pair_to_json_line(b);
}

}  // namespace procstory

#include "procstory/labeler.hpp"

#include <algorithm>

#include "procstory/error.hpp"
#include "procstory/logging.hpp"
#include "procstory/text.hpp"

namespace procstory {

StoryLabeler::StoryLabeler(AttributeSchema schema, const ParserAdapter& parser,
                           const WordSenseDisambiguator& wsd, const LexicalResource& resource,
                           CompletionService& service, const Embedder& embedder,
                           DemonstrationPool pool, LabelerConfig config)
    : schema_(std::move(schema)),
      parser_(parser),
      wsd_(wsd),
      resource_(resource),
      service_(service),
      embedder_(embedder),
      pool_(std::move(pool)),
      config_(std::move(config)) {}

std::vector<Participant> StoryLabeler::extract(const AnnotatedStory& story) const {
  return extract_participants(story, parser_, wsd_, resource_, config_.ontology);
}

std::vector<PromptDemo> StoryLabeler::active_demos() const {
  // First k distinct stories of the pool, in pool order.
  std::vector<PromptDemo> demos;
  std::vector<std::string> seen;
  for (const PoolEntry& entry : pool_.entries()) {
    if (static_cast<int>(demos.size()) >= config_.active_demos) break;
    std::string key = story_text(entry.story);
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
    seen.push_back(key);
    demos.push_back({entry.story, ""});
  }
  return demos;
}

std::vector<std::set<std::string>> StoryLabeler::detect_active(
    const AnnotatedStory& story, const std::vector<std::string>& order,
    const std::string& attribute) {
  PromptRequest request;
  request.mode = PromptMode::active_detection;
  request.attribute = attribute;
  request.query = &story;
  request.demonstrations = active_demos();
  const std::string prompt = build_code_prompt(request);

  for (int attempt = 0; attempt < 2; ++attempt) {
    std::string completion = service_.complete(prompt, config_.completion);
    auto active = parse_active_completion(completion, order, story.step_count());
    if (active) return *active;
    Logger::instance().warn("active_completion_malformed",
                            {{"attribute", attribute}, {"attempt", attempt + 1}});
  }
  return std::vector<std::set<std::string>>(static_cast<std::size_t>(story.step_count()));
}

std::vector<StateAnnotation> StoryLabeler::annotate_states(
    const AnnotatedStory& story, const std::vector<std::string>& order,
    const std::string& participant, const std::string& attribute,
    const std::vector<int>& active_steps, const std::vector<StateAnnotation>& so_far) {
  if (active_steps.empty()) return {};
  const int attr = schema_.index_of(attribute);
  if (attr < 0) throw ValidationError("unknown attribute: " + attribute);

  PromptRequest request;
  request.mode = PromptMode::state_annotation;
  request.attribute = attribute;
  request.query = &story;
  request.query_participant = participant;
  request.annotations_so_far = so_far;
  if (!pool_.empty()) {
    int k = std::min<int>(config_.retrieval_k, static_cast<int>(pool_.size()));
    std::vector<const PoolEntry*> retrieved =
        retrieve_demonstrations(embedder_.embed(story_text(story)),
                                embedder_.embed(participant), pool_, k);
    for (const PoolEntry* entry : retrieved) {
      request.demonstrations.push_back({entry->story, entry->participant});
    }
  }
  const std::string prompt = build_code_prompt(request);

  std::optional<std::map<int, StateLine>> lines;
  for (int attempt = 0; attempt < 2 && !lines; ++attempt) {
    std::string completion = service_.complete(prompt, config_.completion);
    lines = parse_state_completion(completion, order, participant, attribute,
                                   story.step_count());
    if (!lines) {
      Logger::instance().warn("state_completion_malformed",
                              {{"participant", participant},
                               {"attribute", attribute},
                               {"attempt", attempt + 1}});
    }
  }

  std::vector<StateAnnotation> annotations;
  for (int step : active_steps) {
    if (!lines || !lines->count(step)) {
      Logger::instance().warn("state_step_missing",
                              {{"participant", participant},
                               {"attribute", attribute},
                               {"step", step}});
      continue;
    }
    const StateLine& line = lines->at(step);
    auto resolve = [&](const std::optional<std::string>& raw, bool precondition) {
      if (!raw) return std::string(kIrrelevantLabel);
      int index = precondition ? schema_.precondition_label_index(attr, *raw)
                               : schema_.effect_label_index(attr, *raw);
      if (index < 0) {
        Logger::instance().warn("state_label_outside_schema",
                                {{"attribute", attribute}, {"label", *raw}});
        return std::string(kIrrelevantLabel);
      }
      return *raw;
    };
    StateAnnotation annotation;
    annotation.participant = participant;
    annotation.step = step;
    annotation.attribute = attribute;
    annotation.precondition = resolve(line.precondition, true);
    annotation.effect = resolve(line.effect, false);
    annotations.push_back(std::move(annotation));
  }
  return annotations;
}

AnnotatedStory StoryLabeler::extract_only(const AnnotatedStory& story) const {
  AnnotatedStory out;
  out.sentences = story.sentences;
  out.participants = extract(story);
  return out;
}

AnnotatedStory StoryLabeler::label_story(const AnnotatedStory& story) {
  AnnotatedStory out = extract_only(story);
  std::vector<std::string> order = canonical_participant_order(out);

  std::vector<StateAnnotation> annotations;
  for (const AttributeSpec& spec : schema_.attributes()) {
    std::vector<std::set<std::string>> active = detect_active(out, order, spec.name);
    // Active steps per participant for this attribute.
    for (const std::string& surface : order) {
      std::vector<int> steps;
      for (int step = 0; step < out.step_count(); ++step) {
        if (active[static_cast<std::size_t>(step)].count(surface)) steps.push_back(step);
      }
      if (steps.empty()) continue;
      std::vector<StateAnnotation> fresh =
          annotate_states(out, order, surface, spec.name, steps, annotations);
      annotations.insert(annotations.end(), fresh.begin(), fresh.end());
    }
  }
  out.annotations = std::move(annotations);
  return out;
}

std::vector<StoryPair> ingest_external(const std::vector<RawStoryPair>& raw,
                                       StoryLabeler& labeler) {
  std::vector<StoryPair> pairs;
  for (const RawStoryPair& record : raw) {
    auto make_story = [](const std::vector<std::string>& sentences) {
      AnnotatedStory story;
      int index = 0;
      for (const std::string& text : sentences) {
        story.sentences.push_back({index++, text});
      }
      return story;
    };

    bool empty_sentence = record.sentences_a.empty() || record.sentences_b.empty();
    for (const auto* side : {&record.sentences_a, &record.sentences_b}) {
      for (const std::string& text : *side) {
        if (trim(text).empty()) empty_sentence = true;
      }
    }
    if (empty_sentence) {
      Logger::instance().warn("external_pair_dropped",
                              {{"id", record.id}, {"reason", "empty sentence"}});
      continue;
    }

    try {
      AnnotatedStory a = labeler.label_story(make_story(record.sentences_a));
      AnnotatedStory b = labeler.label_story(make_story(record.sentences_b));
      StoryPair pair;
      pair.pair_id = record.id;
      if (record.plausible == 'a') {
        pair.plausible = std::move(a);
        pair.implausible = std::move(b);
      } else {
        pair.plausible = std::move(b);
        pair.implausible = std::move(a);
      }
      pair.plausible.label = kPlausible;
      pair.implausible.label = kImplausible;
      pairs.push_back(std::move(pair));
    } catch (const Error& e) {
      Logger::instance().warn("external_pair_dropped",
                              {{"id", record.id}, {"reason", e.what()}});
    }
  }
  return pairs;
}

}  // namespace procstory

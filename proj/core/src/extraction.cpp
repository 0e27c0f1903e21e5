#include "procstory/extraction.hpp"

#include <algorithm>
#include <map>

#include "procstory/error.hpp"
#include "procstory/logging.hpp"
#include "procstory/text.hpp"

namespace procstory {

namespace {

struct RoleKey {
  std::string role;
  int governor = -1;
  bool operator==(const RoleKey&) const = default;
};

RoleKey role_of(const ParsedSentence& parse, int token) {
  for (const RoleEdge& edge : parse.roles) {
    if (edge.dependent == token) return {edge.role, edge.governor};
  }
  return {};
}

}  // namespace

std::vector<CandidatePhrase> detect_noun_phrases(const Sentence& sentence,
                                                 const ParsedSentence& parse,
                                                 const OntologyConfig& cfg) {
  // Accepted nouns in token order.
  std::vector<int> kept;
  for (const NounTerm& noun : parse.nouns) {
    if (cfg.accepts_class(noun.ontology_class)) kept.push_back(noun.token);
  }
  std::sort(kept.begin(), kept.end());

  std::vector<CandidatePhrase> candidates;
  std::size_t i = 0;
  while (i < kept.size()) {
    std::vector<int> group{kept[i]};
    RoleKey key = role_of(parse, kept[i]);
    std::size_t j = i + 1;
    // Merge adjacent nouns sharing the same role edge ("dog cage").
    while (j < kept.size() && kept[j] == group.back() + 1 && !key.role.empty() &&
           role_of(parse, kept[j]) == key) {
      group.push_back(kept[j]);
      ++j;
    }
    i = j;

    CandidatePhrase candidate;
    candidate.sentence = sentence.index;
    candidate.tokens = group;
    candidate.begin = parse.tokens[static_cast<std::size_t>(group.front())].begin;
    candidate.end = parse.tokens[static_cast<std::size_t>(group.back())].end;
    candidate.surface =
        to_lower(sentence.text.substr(candidate.begin, candidate.end - candidate.begin));
    candidates.push_back(std::move(candidate));
  }
  return candidates;
}

std::vector<CandidatePhrase> filter_core_roles(std::vector<CandidatePhrase> candidates,
                                               const ParsedSentence& parse,
                                               const OntologyConfig& cfg) {
  std::erase_if(candidates, [&](const CandidatePhrase& candidate) {
    for (int token : candidate.tokens) {
      for (const RoleEdge& edge : parse.roles) {
        if (edge.dependent == token && cfg.is_core(edge.role)) return false;
      }
    }
    return true;
  });
  return candidates;
}

std::vector<CandidatePhrase> filter_physical(std::vector<CandidatePhrase> candidates,
                                             const std::string& story_context,
                                             const WordSenseDisambiguator& wsd,
                                             const LexicalResource& resource) {
  std::erase_if(candidates, [&](const CandidatePhrase& candidate) {
    std::optional<std::string> synset =
        wsd.disambiguate(candidate.surface, story_context, resource);
    if (!synset) {
      Logger::instance().warn("physicality_no_synset", {{"candidate", candidate.surface}});
      return true;
    }
    std::optional<bool> physical = resource.is_physical(*synset);
    if (!physical) {
      Logger::instance().warn("physicality_unresolved",
                              {{"candidate", candidate.surface}, {"synset", *synset}});
      return true;
    }
    return !*physical;
  });
  return candidates;
}

std::vector<Participant> extract_participants(const AnnotatedStory& story,
                                              const ParserAdapter& parser,
                                              const WordSenseDisambiguator& wsd,
                                              const LexicalResource& resource,
                                              const OntologyConfig& cfg,
                                              const ExtractionOptions& options) {
  std::string context;
  for (const Sentence& s : story.sentences) {
    if (!context.empty()) context += " ";
    context += s.text;
  }

  std::map<std::string, Participant> by_surface;
  std::vector<std::string> order;
  for (const Sentence& sentence : story.sentences) {
    ParsedSentence parse;
    try {
      parse = parser.parse(sentence.text);
    } catch (const Error& e) {
      throw ParseError("parser failed on sentence " + std::to_string(sentence.index) +
                       ": " + e.what());
    }
    std::vector<CandidatePhrase> candidates = detect_noun_phrases(sentence, parse, cfg);
    if (options.core_role_stage) {
      candidates = filter_core_roles(std::move(candidates), parse, cfg);
    }
    if (options.physical_stage) {
      candidates = filter_physical(std::move(candidates), context, wsd, resource);
    }
    for (const CandidatePhrase& candidate : candidates) {
      auto [it, inserted] = by_surface.try_emplace(candidate.surface);
      if (inserted) {
        it->second.surface = candidate.surface;
        it->second.is_human = resource.is_human_phrase(candidate.surface);
        order.push_back(candidate.surface);
      }
      it->second.mentions.push_back({candidate.sentence, candidate.begin, candidate.end});
    }
  }

  std::vector<Participant> participants;
  for (const std::string& surface : order) participants.push_back(by_surface[surface]);
  return participants;
}

}  // namespace procstory

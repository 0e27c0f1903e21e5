#pragma once

#include <string>
#include <vector>

#include "procstory/lexicon.hpp"
#include "procstory/parse.hpp"
#include "procstory/story.hpp"
#include "procstory/wsd.hpp"

namespace procstory {

/// A participant candidate within one sentence: contiguous noun tokens
/// merged when they share a semantic role.
struct CandidatePhrase {
  std::string surface;  // lowercase phrase
  int sentence = 0;
  std::size_t begin = 0;  // character span in the sentence
  std::size_t end = 0;
  std::vector<int> tokens;
};

/// Stage 1: nouns whose ontology class is accepted, with same-role
/// neighbours merged into one phrase in surface order.
std::vector<CandidatePhrase> detect_noun_phrases(const Sentence& sentence,
                                                 const ParsedSentence& parse,
                                                 const OntologyConfig& cfg);

/// Stage 2: keep candidates engaged in at least one core-role edge.
std::vector<CandidatePhrase> filter_core_roles(std::vector<CandidatePhrase> candidates,
                                               const ParsedSentence& parse,
                                               const OntologyConfig& cfg);

/// Stage 3: keep candidates whose disambiguated sense reaches the
/// physical-entity root. Candidates without a lexical entry are dropped
/// with a warning.
std::vector<CandidatePhrase> filter_physical(std::vector<CandidatePhrase> candidates,
                                             const std::string& story_context,
                                             const WordSenseDisambiguator& wsd,
                                             const LexicalResource& resource);

struct ExtractionOptions {
  bool core_role_stage = true;
  bool physical_stage = true;
};

/// The three-stage pipeline over every sentence, deduplicated by
/// normalized surface, with mentions recorded per sentence.
std::vector<Participant> extract_participants(const AnnotatedStory& story,
                                              const ParserAdapter& parser,
                                              const WordSenseDisambiguator& wsd,
                                              const LexicalResource& resource,
                                              const OntologyConfig& cfg,
                                              const ExtractionOptions& options = {});

}  // namespace procstory

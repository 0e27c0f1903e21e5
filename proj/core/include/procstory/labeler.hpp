#pragma once

#include <set>
#include <string>
#include <vector>

#include "procstory/augment.hpp"
#include "procstory/completion.hpp"
#include "procstory/embedding.hpp"
#include "procstory/extraction.hpp"
#include "procstory/prompt.hpp"
#include "procstory/schema.hpp"

namespace procstory {

struct LabelerConfig {
  OntologyConfig ontology = OntologyConfig::defaults();
  int active_demos = 3;     // examples prepended for active detection
  int retrieval_k = 4;      // demonstrations retrieved for state annotation
  CompletionParams completion;
};

/// Dense annotation of arbitrary stories: three-stage participant
/// extraction, then per attribute an active-participant pass and a state
/// pass against the completion service.
class StoryLabeler {
 public:
  StoryLabeler(AttributeSchema schema, const ParserAdapter& parser,
               const WordSenseDisambiguator& wsd, const LexicalResource& resource,
               CompletionService& service, const Embedder& embedder,
               DemonstrationPool pool, LabelerConfig config = {});

  const AttributeSchema& schema() const { return schema_; }

  std::vector<Participant> extract(const AnnotatedStory& story) const;

  /// Active participant surfaces per step for one attribute. A completion
  /// that fails to parse is retried once, then the affected steps come
  /// back empty with a warning.
  std::vector<std::set<std::string>> detect_active(const AnnotatedStory& story,
                                                   const std::vector<std::string>& order,
                                                   const std::string& attribute);

  /// Precondition/effect annotations for one participant at its active
  /// steps. Labels outside the schema map to the irrelevant label with a
  /// warning; unparseable completions skip the step.
  std::vector<StateAnnotation> annotate_states(const AnnotatedStory& story,
                                               const std::vector<std::string>& order,
                                               const std::string& participant,
                                               const std::string& attribute,
                                               const std::vector<int>& active_steps,
                                               const std::vector<StateAnnotation>& so_far);

  /// The full pipeline; the result carries participants and annotations
  /// but no plausibility label.
  AnnotatedStory label_story(const AnnotatedStory& story);

  /// Extraction only (participants, no attribute annotation).
  AnnotatedStory extract_only(const AnnotatedStory& story) const;

 private:
  std::vector<PromptDemo> active_demos() const;

  AttributeSchema schema_;
  const ParserAdapter& parser_;
  const WordSenseDisambiguator& wsd_;
  const LexicalResource& resource_;
  CompletionService& service_;
  const Embedder& embedder_;
  DemonstrationPool pool_;
  LabelerConfig config_;
};

/// Labels raw external pairs and assembles StoryPair values. Pairs with an
/// empty sentence (or a labeling failure) are dropped with a logged
/// reason. Ingested pairs carry no conflict annotation.
std::vector<StoryPair> ingest_external(const std::vector<RawStoryPair>& raw,
                                       StoryLabeler& labeler);

}  // namespace procstory

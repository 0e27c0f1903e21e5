#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace procstory {

/// Noun lexicon with hypernym up-links, loaded from a JSON file derived
/// from a standard lexical database. Synset ids follow the usual
/// "lemma.n.NN" convention; every synset's up-links terminate in the
/// physical-entity or abstract-entity root.
class LexicalResource {
 public:
  static constexpr const char* kPhysicalRoot = "physical_entity.n.01";
  static constexpr const char* kAbstractRoot = "abstract_entity.n.01";
  static constexpr const char* kPersonSynset = "person.n.01";

  static LexicalResource load(const std::string& path);
  static LexicalResource from_json_string(const std::string& text);

  /// Synset ids for a lemma, most frequent sense first. The lemma key is
  /// lowercase with spaces collapsed to underscores.
  std::vector<std::string> synsets(const std::string& lemma) const;
  std::optional<std::string> first_synset(const std::string& lemma) const;

  bool has_synset(const std::string& synset) const;
  std::vector<std::string> hypernyms(const std::string& synset) const;

  /// First lemma of the synset, underscores rendered as spaces.
  std::optional<std::string> first_lemma(const std::string& synset) const;

  /// Direct hypernym's first lemma under the first sense; the participant
  /// abstraction rule. Looks up the full phrase first, then the head
  /// (last) word.
  std::optional<std::string> direct_hypernym_lemma(const std::string& phrase) const;

  /// Breadth-first up-link traversal until one of the two roots appears.
  /// Returns true for physical, false for abstract; nullopt when the
  /// synset is unknown.
  std::optional<bool> is_physical(const std::string& synset) const;

  /// True when the person synset lies on the up-link closure.
  bool path_contains_person(const std::string& synset) const;

  /// Phrase-level human test: first sense of the phrase (or its head word)
  /// passes through the person synset.
  bool is_human_phrase(const std::string& phrase) const;

  static std::string lemma_key(const std::string& phrase);

 private:
  struct Synset {
    std::vector<std::string> lemmas;
    std::vector<std::string> hypernyms;
  };

  void validate() const;

  std::map<std::string, Synset> synsets_;
  std::map<std::string, std::vector<std::string>> senses_;
};

}  // namespace procstory

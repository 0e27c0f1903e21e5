#pragma once

#include <string>
#include <vector>

namespace procstory {

struct ParsedToken {
  std::string text;
  std::string lemma;
  std::string pos;  // coarse tag: NOUN, PROPN, PRON, VERB, AUX, DET, ADP, ADJ, ADV, PUNCT, OTHER
  std::size_t begin = 0;
  std::size_t end = 0;
};

/// A noun term with the ontology class its determiner form implies.
struct NounTerm {
  int token = 0;
  std::string ontology_class;
};

/// Semantic role edge between a verbal governor and a nominal dependent.
/// Role names follow the ontology convention (AGENT, AFFECTED, ...);
/// non-core attachments use TIME and MOD.
struct RoleEdge {
  std::string role;
  int governor = 0;
  int dependent = 0;
};

struct ParsedSentence {
  std::vector<ParsedToken> tokens;
  std::vector<NounTerm> nouns;
  std::vector<RoleEdge> roles;
};

/// Which ontology classes admit a noun as a participant candidate and
/// which semantic roles count as core (dynamic) involvement.
struct OntologyConfig {
  std::vector<std::string> classes;
  std::vector<std::string> core_roles;

  static OntologyConfig defaults();
  bool accepts_class(const std::string& ontology_class) const;
  bool is_core(const std::string& role) const;
};

/// Adapter around a semantic parser. The deep parser runs remotely; the
/// rule-based fallback keeps the pipeline testable offline.
class ParserAdapter {
 public:
  virtual ~ParserAdapter() = default;
  virtual ParsedSentence parse(const std::string& sentence) const = 0;
};

/// Offline approximation: closed-class word lists and suffix heuristics
/// for tags, determiner form for the ontology class, verb/preposition
/// position for role edges. Nouns of one chunk share the chunk's role so
/// compounds like "dog cage" merge downstream.
class RuleBasedParser : public ParserAdapter {
 public:
  ParsedSentence parse(const std::string& sentence) const override;
};

/// Client for a parser service: POST /parse {"sentence": ...} returning
/// the ParsedSentence fields as JSON.
class RemoteParserClient : public ParserAdapter {
 public:
  explicit RemoteParserClient(std::string endpoint);
  ParsedSentence parse(const std::string& sentence) const override;

 private:
  std::string endpoint_;
};

}  // namespace procstory

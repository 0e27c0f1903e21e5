#include "procstory/parse.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include <httplib.h>
#include <json.hpp>

#include "procstory/error.hpp"
#include "procstory/text.hpp"

namespace procstory {

OntologyConfig OntologyConfig::defaults() {
  OntologyConfig cfg;
  cfg.classes = {"ONT::THE",    "ONT::THE-SET",    "ONT::A",       "ONT::INDEF-SET",
                 "ONT::SM",     "ONT::PRO",        "ONT::PRO-SET", "ONT::BARE",
                 "ONT::QUANTIFIER", "ONT::WH-TERM", "ONT::WH-TERM-SET"};
  cfg.core_roles = {"AGENT",       "AFFECTED",        "FIGURE",
                    "GROUND",      "AFFECTED-RESULT", "BENEFICIARY",
                    "NEUTRAL",     "EXPERIENCER",     "FORMAL"};
  return cfg;
}

bool OntologyConfig::accepts_class(const std::string& ontology_class) const {
  return std::find(classes.begin(), classes.end(), ontology_class) != classes.end();
}

bool OntologyConfig::is_core(const std::string& role) const {
  return std::find(core_roles.begin(), core_roles.end(), role) != core_roles.end();
}

namespace {

using Set = std::unordered_set<std::string>;

const Set& determiners() {
  static const Set s = {"the",  "a",    "an",   "some", "this",  "that",  "these", "those",
                        "his",  "her",  "their", "my",  "your",  "its",   "our",   "no",
                        "any",  "every", "each", "all", "both",  "which", "what"};
  return s;
}

const Set& pronouns() {
  static const Set s = {"he",      "she",     "it",     "they",    "them",   "him",
                        "i",       "we",      "you",    "us",      "me",     "himself",
                        "herself", "itself",  "themselves", "someone", "something",
                        "anyone",  "anything", "everyone", "everything", "nobody"};
  return s;
}

const Set& plural_pronouns() {
  static const Set s = {"they", "them", "we", "us"};
  return s;
}

const Set& prepositions() {
  static const Set s = {"in",     "on",     "at",     "into",   "onto",   "with",
                        "without", "from",  "to",     "of",     "under",  "over",
                        "inside", "outside", "near",  "behind", "beside", "across",
                        "through", "off",   "by",     "for",    "around", "against",
                        "after",  "before", "during", "about",  "toward", "towards",
                        "upon",   "out",    "up",     "down"};
  return s;
}

const Set& auxiliaries() {
  static const Set s = {"is",   "are",  "was",  "were", "be",    "been",  "being", "am",
                        "has",  "have", "had",  "do",   "does",  "did",   "will",
                        "would", "can", "could", "shall", "should", "may", "might",
                        "must", "wo",   "ca"};
  return s;
}

const Set& conjunctions() {
  static const Set s = {"and", "or", "but", "so", "because", "when", "while",
                        "then", "until", "if", "as", "than", "not", "n't",
                        "there", "very", "too", "also", "just", "only", "again"};
  return s;
}

const Set& base_verbs() {
  static const Set s = {
      "take",   "put",    "go",     "get",     "make",   "eat",    "drink",  "open",
      "close",  "turn",   "pick",   "wash",    "cut",    "grab",   "place",  "fill",
      "pour",   "heat",   "cook",   "boil",    "bake",   "fry",    "mix",    "stir",
      "add",    "remove", "bring",  "leave",   "break",  "light",  "plug",   "switch",
      "walk",   "run",    "sit",    "stand",   "lie",    "sleep",  "wake",   "look",
      "see",    "watch",  "find",   "lose",    "want",   "need",   "decide", "start",
      "begin",  "stop",   "finish", "try",     "use",    "write",  "read",   "draw",
      "play",   "buy",    "sell",   "give",    "hand",   "throw",  "catch",  "drop",
      "hold",   "carry",  "move",   "push",    "pull",   "lift",   "set",    "clean",
      "wipe",   "dry",    "spill",  "serve",   "taste",  "smell",  "touch",  "feel",
      "hear",   "listen", "say",    "tell",    "ask",    "answer", "call",   "drive",
      "ride",   "park",   "lock",   "unlock",  "knock",  "enter",  "climb",  "jump",
      "fall",   "hit",    "kick",   "slice",   "chop",   "peel",   "toast",  "freeze",
      "melt",   "burn",   "unplug", "charge",  "laugh",  "smile",  "cry",    "realize",
      "notice", "forget", "remember", "grow",  "plant",  "water",  "feed",   "brush",
      "shave",  "shower", "dress",  "wear",    "tie",    "fold",   "hang",   "sweep",
      "mop",    "dust",   "scrub",  "rinse",   "soak",   "drain",  "squeeze", "crack",
      "whisk",  "knead",  "roll",   "spread",  "wrap",   "store",  "happen", "become",
      "seem",   "stay",   "keep",   "let",     "help",   "wait",   "arrive", "return",
      "visit",  "meet",   "join",   "follow",  "send",   "receive", "pack",  "load",
      "fix",    "repair", "build",  "paint",   "measure", "check", "come",   "know",
      "think",  "head",   "continue", "discover", "microwave", "sip", "scoop", "vacuum"};
  return s;
}

const std::unordered_map<std::string, std::string>& irregular_past() {
  static const std::unordered_map<std::string, std::string> m = {
      {"took", "take"},   {"went", "go"},     {"got", "get"},    {"made", "make"},
      {"ate", "eat"},     {"drank", "drink"}, {"drunk", "drink"}, {"broke", "break"},
      {"broken", "break"}, {"brought", "bring"}, {"left", "leave"}, {"lit", "light"},
      {"sat", "sit"},     {"stood", "stand"}, {"lay", "lie"},    {"slept", "sleep"},
      {"woke", "wake"},   {"saw", "see"},     {"seen", "see"},   {"found", "find"},
      {"lost", "lose"},   {"began", "begin"}, {"wrote", "write"}, {"written", "write"},
      {"drew", "draw"},   {"bought", "buy"},  {"sold", "sell"},  {"gave", "give"},
      {"given", "give"},  {"threw", "throw"}, {"thrown", "throw"}, {"caught", "catch"},
      {"held", "hold"},   {"drove", "drive"}, {"rode", "ride"},  {"fell", "fall"},
      {"fallen", "fall"}, {"froze", "freeze"}, {"frozen", "freeze"}, {"felt", "feel"},
      {"heard", "hear"},  {"said", "say"},    {"told", "tell"},  {"ran", "run"},
      {"came", "come"},   {"knew", "know"},   {"thought", "think"}, {"forgot", "forget"},
      {"grew", "grow"},   {"swept", "sweep"}, {"kept", "keep"},  {"met", "meet"},
      {"sent", "send"},   {"built", "build"}, {"wore", "wear"},  {"became", "become"},
      {"spilt", "spill"}, {"hung", "hang"},   {"put", "put"},    {"cut", "cut"},
      {"set", "set"},     {"hit", "hit"},     {"let", "let"},    {"read", "read"}};
  return m;
}

const Set& adjectives() {
  static const Set s = {
      "cold",     "hot",     "warm",   "cool",   "wet",      "dry",     "clean",
      "dirty",    "empty",   "full",   "new",    "old",      "big",     "small",
      "large",    "little",  "long",   "short",  "high",     "low",     "closed",
      "broken",   "fresh",   "stale",  "sharp",  "dull",     "heavy",   "soft",
      "hard",     "smooth",  "rough",  "sweet",  "sour",     "bitter",  "salty",
      "delicious", "tasty",  "wonderful", "great", "good",   "bad",     "nice",
      "happy",    "sad",     "angry",  "tired",  "hungry",   "thirsty", "sick",
      "healthy",  "bright",  "dark",   "loud",   "quiet",    "fast",    "slow",
      "red",      "blue",    "green",  "yellow", "black",    "white",   "brown",
      "orange",   "purple",  "pink",   "gray",   "wooden",   "plastic", "ready",
      "sure",     "safe",    "favorite", "whole", "next",    "last",    "first",
      "final",    "gone",    "alive",  "dead",   "asleep",   "awake",   "melted",
      "burnt",    "cooked",  "raw",    "ripe",   "functional", "cracked"};
  return s;
}

const Set& temporal_nouns() {
  static const Set s = {"morning", "evening", "afternoon", "night",   "day",
                        "week",    "month",   "year",      "hour",    "minute",
                        "moment",  "time",    "today",     "yesterday", "tomorrow",
                        "weekend", "noon",    "midnight"};
  return s;
}

const Set& singular_s_nouns() {
  static const Set s = {"glass", "grass", "dress", "class", "gas", "bus", "lens",
                        "series", "mess", "mattress", "process", "express", "this"};
  return s;
}

bool looks_plural(const std::string& word) {
  if (word.size() < 3 || word.back() != 's') return false;
  if (singular_s_nouns().count(word)) return false;
  if (word.ends_with("ss") || word.ends_with("us") || word.ends_with("is")) return false;
  return true;
}

std::string noun_lemma(const std::string& word) {
  if (!looks_plural(word)) return word;
  if (word.ends_with("ies") && word.size() > 4) {
    return word.substr(0, word.size() - 3) + "y";
  }
  if (word.ends_with("xes") || word.ends_with("ses") || word.ends_with("zes") ||
      word.ends_with("ches") || word.ends_with("shes")) {
    return word.substr(0, word.size() - 2);
  }
  return word.substr(0, word.size() - 1);
}

bool verb_lemma(const std::string& word, std::string& lemma) {
  auto it = irregular_past().find(word);
  if (it != irregular_past().end()) {
    lemma = it->second;
    return true;
  }
  if (base_verbs().count(word)) {
    lemma = word;
    return true;
  }
  auto try_base = [&](const std::string& stem) {
    if (base_verbs().count(stem)) {
      lemma = stem;
      return true;
    }
    return false;
  };
  for (const char* suffix : {"ed", "ing", "es", "s"}) {
    std::string suf = suffix;
    if (word.size() > suf.size() + 1 && word.ends_with(suf)) {
      std::string stem = word.substr(0, word.size() - suf.size());
      if (try_base(stem)) return true;
      if (try_base(stem + "e")) return true;  // placed -> place
      if (stem.size() > 2 && stem[stem.size() - 1] == stem[stem.size() - 2] &&
          try_base(stem.substr(0, stem.size() - 1))) {
        return true;  // grabbed -> grab
      }
    }
  }
  return false;
}

bool is_temporal_preposition(const std::string& word) {
  static const Set s = {"in", "at", "on", "during", "after", "before"};
  return s.count(word) > 0;
}

}  // namespace

ParsedSentence RuleBasedParser::parse(const std::string& sentence) const {
  ParsedSentence parsed;
  std::vector<TextToken> raw = tokenize_with_spans(sentence);

  // Pass 1: coarse tags.
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const TextToken& t = raw[i];
    ParsedToken token;
    token.text = t.text;
    token.begin = t.begin;
    token.end = t.end;
    std::string lower = to_lower(t.text);
    token.lemma = lower;

    bool word = std::isalnum(static_cast<unsigned char>(t.text[0])) || t.text[0] == '_';
    std::string verb;
    if (!word) {
      token.pos = "PUNCT";
    } else if (determiners().count(lower)) {
      token.pos = "DET";
    } else if (pronouns().count(lower)) {
      token.pos = "PRON";
    } else if (auxiliaries().count(lower)) {
      token.pos = "AUX";
    } else if (prepositions().count(lower)) {
      token.pos = "ADP";
    } else if (conjunctions().count(lower)) {
      token.pos = "OTHER";
    } else if (adjectives().count(lower)) {
      token.pos = "ADJ";
    } else if (verb_lemma(lower, verb)) {
      token.pos = "VERB";
      token.lemma = verb;
    } else if (lower.size() > 3 && lower.ends_with("ly")) {
      token.pos = "ADV";
    } else {
      bool capitalized = std::isupper(static_cast<unsigned char>(t.text[0])) != 0;
      token.pos = capitalized && i > 0 ? "PROPN" : "NOUN";
      token.lemma = noun_lemma(lower);
    }
    parsed.tokens.push_back(std::move(token));
  }

  // A verb-list word wedged between a determiner/adjective and a noun acts
  // as a modifier ("the open door").
  for (std::size_t i = 1; i + 1 < parsed.tokens.size(); ++i) {
    if (parsed.tokens[i].pos != "VERB") continue;
    const std::string& prev = parsed.tokens[i - 1].pos;
    const std::string& next = parsed.tokens[i + 1].pos;
    if ((prev == "DET" || prev == "ADJ") && (next == "NOUN" || next == "PROPN")) {
      parsed.tokens[i].pos = "ADJ";
    }
  }

  const int count = static_cast<int>(parsed.tokens.size());
  auto is_nounish = [&](int i) {
    const std::string& pos = parsed.tokens[static_cast<std::size_t>(i)].pos;
    return pos == "NOUN" || pos == "PROPN" || pos == "PRON";
  };
  auto in_chunk = [&](int i) {
    const std::string& pos = parsed.tokens[static_cast<std::size_t>(i)].pos;
    return pos == "NOUN" || pos == "PROPN" || pos == "PRON" || pos == "DET" || pos == "ADJ";
  };

  int first_verbal = -1;
  bool has_main_verb = false;
  for (int i = 0; i < count; ++i) {
    const std::string& pos = parsed.tokens[static_cast<std::size_t>(i)].pos;
    if (pos == "VERB") has_main_verb = true;
    if (first_verbal < 0 && (pos == "VERB" || pos == "AUX")) first_verbal = i;
  }

  // Pass 2: chunks and their role edges.
  int i = 0;
  while (i < count) {
    if (!in_chunk(i)) {
      ++i;
      continue;
    }
    int begin = i;
    while (i < count && in_chunk(i)) ++i;
    int end = i;
    std::vector<int> noun_tokens;
    for (int j = begin; j < end; ++j) {
      if (is_nounish(j)) noun_tokens.push_back(j);
    }
    if (noun_tokens.empty()) continue;

    // Governing context of the chunk.
    int prev = begin - 1;
    while (prev >= 0 && (parsed.tokens[static_cast<std::size_t>(prev)].pos == "ADV" ||
                         parsed.tokens[static_cast<std::size_t>(prev)].pos == "OTHER")) {
      --prev;
    }
    int nearest_verbal = -1;
    for (int j = begin - 1; j >= 0; --j) {
      const std::string& pos = parsed.tokens[static_cast<std::size_t>(j)].pos;
      if (pos == "VERB" || pos == "AUX") {
        nearest_verbal = j;
        break;
      }
    }

    std::string role;
    int governor = -1;
    const std::string head_lemma =
        parsed.tokens[static_cast<std::size_t>(noun_tokens.back())].lemma;
    if (prev >= 0 && parsed.tokens[static_cast<std::size_t>(prev)].pos == "ADP") {
      const std::string prep = to_lower(parsed.tokens[static_cast<std::size_t>(prev)].text);
      if (is_temporal_preposition(prep) && temporal_nouns().count(head_lemma)) {
        role = "TIME";  // adverbial time phrase, not a core involvement
      } else {
        role = "GROUND";
      }
      governor = nearest_verbal >= 0 ? nearest_verbal : prev;
    } else if (first_verbal >= 0 && end <= first_verbal) {
      governor = first_verbal;
      role = has_main_verb ? "AGENT" : "FIGURE";
    } else if (nearest_verbal >= 0) {
      governor = nearest_verbal;
      role = parsed.tokens[static_cast<std::size_t>(nearest_verbal)].pos == "VERB"
                 ? "AFFECTED"
                 : "GROUND";
    }
    if (!role.empty()) {
      for (int noun : noun_tokens) {
        parsed.roles.push_back({role, governor, noun});
      }
    }

    // Ontology classes from the determiner form.
    std::string det;
    for (int j = begin; j < end; ++j) {
      if (parsed.tokens[static_cast<std::size_t>(j)].pos == "DET") {
        det = to_lower(parsed.tokens[static_cast<std::size_t>(j)].text);
      }
    }
    for (int noun : noun_tokens) {
      const ParsedToken& token = parsed.tokens[static_cast<std::size_t>(noun)];
      std::string lower = to_lower(token.text);
      bool plural = looks_plural(lower);
      std::string ontology;
      if (token.pos == "PRON") {
        ontology = plural_pronouns().count(lower) ? "ONT::PRO-SET" : "ONT::PRO";
      } else if (det == "the" || det == "this" || det == "that" || det == "these" ||
                 det == "those" || det == "his" || det == "her" || det == "their" ||
                 det == "my" || det == "your" || det == "its" || det == "our") {
        ontology = plural ? "ONT::THE-SET" : "ONT::THE";
      } else if (det == "a" || det == "an") {
        ontology = "ONT::A";
      } else if (det == "some") {
        ontology = "ONT::SM";
      } else if (det == "every" || det == "each" || det == "all" || det == "both" ||
                 det == "any" || det == "no") {
        ontology = "ONT::QUANTIFIER";
      } else if (det == "which" || det == "what") {
        ontology = plural ? "ONT::WH-TERM-SET" : "ONT::WH-TERM";
      } else if (token.pos == "PROPN") {
        ontology = "ONT::THE";
      } else {
        ontology = plural ? "ONT::INDEF-SET" : "ONT::BARE";
      }
      parsed.nouns.push_back({noun, ontology});
    }
  }
  return parsed;
}

RemoteParserClient::RemoteParserClient(std::string endpoint)
    : endpoint_(std::move(endpoint)) {}

ParsedSentence RemoteParserClient::parse(const std::string& sentence) const {
  httplib::Client client(endpoint_);
  client.set_read_timeout(30, 0);
  nlohmann::json request = {{"sentence", sentence}};
  httplib::Result res = client.Post("/parse", request.dump(), "application/json");
  if (!res || res->status != 200) {
    throw ServiceError("parser endpoint " + endpoint_ + " failed" +
                       (res ? " with status " + std::to_string(res->status) : ""));
  }
  nlohmann::json body = nlohmann::json::parse(res->body);
  ParsedSentence parsed;
  for (const auto& t : body.at("tokens")) {
    parsed.tokens.push_back({t.at("text").get<std::string>(),
                             t.at("lemma").get<std::string>(),
                             t.at("pos").get<std::string>(),
                             t.at("begin").get<std::size_t>(),
                             t.at("end").get<std::size_t>()});
  }
  for (const auto& n : body.at("nouns")) {
    parsed.nouns.push_back({n.at("token").get<int>(), n.at("class").get<std::string>()});
  }
  for (const auto& r : body.at("roles")) {
    parsed.roles.push_back({r.at("role").get<std::string>(), r.at("governor").get<int>(),
                            r.at("dependent").get<int>()});
  }
  return parsed;
}

}  // namespace procstory

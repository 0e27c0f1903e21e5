#include "procstory/lexicon.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <set>

#include <json.hpp>

#include "procstory/error.hpp"
#include "procstory/text.hpp"

namespace procstory {

using nlohmann::json;

std::string LexicalResource::lemma_key(const std::string& phrase) {
  std::string key = to_lower(trim(phrase));
  std::replace(key.begin(), key.end(), ' ', '_');
  return key;
}

LexicalResource LexicalResource::from_json_string(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("lexicon: ") + e.what());
  }
  LexicalResource resource;
  for (const auto& [id, body] : doc.at("synsets").items()) {
    Synset synset;
    synset.lemmas = body.at("lemmas").get<std::vector<std::string>>();
    synset.hypernyms = body.value("hypernyms", std::vector<std::string>{});
    resource.synsets_[id] = std::move(synset);
  }
  for (const auto& [lemma, ids] : doc.at("senses").items()) {
    resource.senses_[lemma] = ids.get<std::vector<std::string>>();
  }
  resource.validate();
  return resource;
}

LexicalResource LexicalResource::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open lexicon file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_json_string(text);
}

void LexicalResource::validate() const {
  for (const auto& [id, synset] : synsets_) {
    for (const std::string& h : synset.hypernyms) {
      if (!synsets_.count(h)) {
        throw ValidationError("lexicon synset '" + id + "' links to unknown '" + h + "'");
      }
    }
    if (!is_physical(id).has_value() && id != kPhysicalRoot && id != kAbstractRoot) {
      throw ValidationError("lexicon synset '" + id + "' reaches neither root");
    }
  }
  for (const auto& [lemma, ids] : senses_) {
    for (const std::string& id : ids) {
      if (!synsets_.count(id)) {
        throw ValidationError("lexicon sense list of '" + lemma + "' names unknown '" + id +
                              "'");
      }
    }
  }
}

std::vector<std::string> LexicalResource::synsets(const std::string& lemma) const {
  auto it = senses_.find(lemma_key(lemma));
  return it == senses_.end() ? std::vector<std::string>{} : it->second;
}

std::optional<std::string> LexicalResource::first_synset(const std::string& lemma) const {
  std::vector<std::string> ids = synsets(lemma);
  if (ids.empty()) return std::nullopt;
  return ids.front();
}

bool LexicalResource::has_synset(const std::string& synset) const {
  return synsets_.count(synset) > 0;
}

std::vector<std::string> LexicalResource::hypernyms(const std::string& synset) const {
  auto it = synsets_.find(synset);
  return it == synsets_.end() ? std::vector<std::string>{} : it->second.hypernyms;
}

std::optional<std::string> LexicalResource::first_lemma(const std::string& synset) const {
  auto it = synsets_.find(synset);
  if (it == synsets_.end() || it->second.lemmas.empty()) return std::nullopt;
  std::string lemma = it->second.lemmas.front();
  std::replace(lemma.begin(), lemma.end(), '_', ' ');
  return lemma;
}

std::optional<std::string> LexicalResource::direct_hypernym_lemma(
    const std::string& phrase) const {
  auto lookup = [this](const std::string& lemma) -> std::optional<std::string> {
    std::optional<std::string> synset = first_synset(lemma);
    if (!synset) return std::nullopt;
    std::vector<std::string> ups = hypernyms(*synset);
    if (ups.empty()) return std::nullopt;
    return first_lemma(ups.front());
  };
  if (auto direct = lookup(phrase)) return direct;
  // Head-noun fallback for phrases without their own entry.
  std::vector<std::string> words = word_tokens(phrase);
  if (words.size() > 1) return lookup(words.back());
  return std::nullopt;
}

std::optional<bool> LexicalResource::is_physical(const std::string& synset) const {
  if (!synsets_.count(synset)) return std::nullopt;
  std::set<std::string> visited;
  std::deque<std::string> queue{synset};
  while (!queue.empty()) {
    std::string current = queue.front();
    queue.pop_front();
    if (current == kPhysicalRoot) return true;
    if (current == kAbstractRoot) return false;
    if (!visited.insert(current).second) continue;
    for (const std::string& h : hypernyms(current)) queue.push_back(h);
  }
  return std::nullopt;
}

bool LexicalResource::path_contains_person(const std::string& synset) const {
  if (!synsets_.count(synset)) return false;
  std::set<std::string> visited;
  std::deque<std::string> queue{synset};
  while (!queue.empty()) {
    std::string current = queue.front();
    queue.pop_front();
    if (current == kPersonSynset) return true;
    if (!visited.insert(current).second) continue;
    for (const std::string& h : hypernyms(current)) queue.push_back(h);
  }
  return false;
}

bool LexicalResource::is_human_phrase(const std::string& phrase) const {
  std::optional<std::string> synset = first_synset(phrase);
  if (!synset) {
    std::vector<std::string> words = word_tokens(phrase);
    if (words.size() > 1) synset = first_synset(words.back());
  }
  return synset && path_contains_person(*synset);
}

}  // namespace procstory

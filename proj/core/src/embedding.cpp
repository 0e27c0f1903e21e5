#include "procstory/embedding.hpp"

#include <algorithm>
#include <cmath>

#include "procstory/error.hpp"
#include "procstory/hash.hpp"
#include "procstory/text.hpp"

namespace procstory {

HashingEmbedder::HashingEmbedder(int dim, std::uint64_t seed) : dim_(dim), seed_(seed) {
  if (dim_ <= 0) throw ConfigError("embedder dim must be positive");
}

Eigen::VectorXd HashingEmbedder::embed(const std::string& text) const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(dim_);
  for (const std::string& token : word_tokens(text)) {
    for (int i = 0; i < dim_; ++i) {
      // Two hash bits per coordinate: one for presence, one for sign.
      std::uint64_t bits = fnv1a64(token, seed_ + 0x9e37 * (static_cast<std::uint64_t>(i) + 1));
      if (bits & 1) v(i) += (bits & 2) ? 1.0 : -1.0;
    }
  }
  double norm = v.norm();
  if (norm > 0) v /= norm;
  return v;
}

std::string story_text(const AnnotatedStory& story) {
  std::string text;
  for (const Sentence& s : story.sentences) {
    if (!text.empty()) text += " ";
    text += s.text;
  }
  return text;
}

void DemonstrationPool::add(PoolEntry entry) {
  if (!entries_.empty()) {
    if (entries_.front().story_embedding.size() != entry.story_embedding.size() ||
        entries_.front().participant_embedding.size() !=
            entry.participant_embedding.size()) {
      throw DimensionError("pool embeddings must share one dimension");
    }
  }
  entries_.push_back(std::move(entry));
}

DemonstrationPool DemonstrationPool::build(const std::vector<AnnotatedStory>& stories,
                                           const Embedder& embedder) {
  DemonstrationPool pool;
  for (const AnnotatedStory& story : stories) {
    Eigen::VectorXd story_vec = embedder.embed(story_text(story));
    for (const Participant& p : story.participants) {
      PoolEntry entry;
      entry.story = story;
      entry.participant = p.surface;
      entry.story_embedding = story_vec;
      entry.participant_embedding = embedder.embed(p.surface);
      pool.add(std::move(entry));
    }
  }
  return pool;
}

double cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) throw DimensionError("cosine over mismatched dimensions");
  double na = a.norm();
  double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return a.dot(b) / (na * nb);
}

std::vector<const PoolEntry*> retrieve_demonstrations(const Eigen::VectorXd& query_story,
                                                      const Eigen::VectorXd& query_participant,
                                                      const DemonstrationPool& pool, int k) {
  if (pool.empty()) throw ValidationError("demonstration pool is empty");
  if (k < 0 || static_cast<std::size_t>(k) > pool.size()) {
    throw ValidationError("retrieval k must lie in [0, pool size]");
  }
  struct Scored {
    double score;
    std::size_t index;
  };
  std::vector<Scored> scored;
  scored.reserve(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const PoolEntry& entry = pool.entries()[i];
    double score = 0.5 * (cosine(query_story, entry.story_embedding) +
                          cosine(query_participant, entry.participant_embedding));
    scored.push_back({score, i});
  }
  std::stable_sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.index < b.index;
  });
  std::vector<const PoolEntry*> out;
  for (int i = 0; i < k; ++i) {
    out.push_back(&pool.entries()[scored[static_cast<std::size_t>(i)].index]);
  }
  return out;
}

}  // namespace procstory

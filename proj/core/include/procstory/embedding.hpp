#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "procstory/story.hpp"

namespace procstory {

/// Text -> fixed-width vector, for demonstration retrieval. Must be
/// deterministic; the pool assumes one embedder produced every vector.
class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual int dim() const = 0;
  virtual Eigen::VectorXd embed(const std::string& text) const = 0;
};

/// Seeded random-projection bag of words: each token hashes to a sign
/// pattern, vectors are L2-normalized. No external weights, stable across
/// runs.
class HashingEmbedder : public Embedder {
 public:
  explicit HashingEmbedder(int dim = 64, std::uint64_t seed = 29);
  int dim() const override { return dim_; }
  Eigen::VectorXd embed(const std::string& text) const override;

 private:
  int dim_;
  std::uint64_t seed_;
};

/// One retrievable in-context example: an annotated story, the
/// participant whose states it demonstrates, and the precomputed
/// embeddings retrieval scores against.
struct PoolEntry {
  AnnotatedStory story;
  std::string participant;
  Eigen::VectorXd story_embedding;
  Eigen::VectorXd participant_embedding;
};

class DemonstrationPool {
 public:
  DemonstrationPool() = default;

  /// Embeds the full story text and the participant word for each entry.
  static DemonstrationPool build(const std::vector<AnnotatedStory>& stories,
                                 const Embedder& embedder);

  void add(PoolEntry entry);
  const std::vector<PoolEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

 private:
  std::vector<PoolEntry> entries_;
};

double cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// Top-k pool entries by the mean of story and participant cosine
/// similarity; ties resolve toward the lower pool index.
std::vector<const PoolEntry*> retrieve_demonstrations(const Eigen::VectorXd& query_story,
                                                      const Eigen::VectorXd& query_participant,
                                                      const DemonstrationPool& pool, int k);

std::string story_text(const AnnotatedStory& story);

}  // namespace procstory

#ifndef BULLYSCOPE_SYNTHETIC_HPP
#define BULLYSCOPE_SYNTHETIC_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "error.hpp"
#include "labels.hpp"
#include "lexicon.hpp"
#include "numerics/rng.hpp"

namespace bullyscope {

/// Parameters of a planted-signal corpus.
struct SyntheticSpec {
  std::size_t sessions = 1000;
  double positive_fraction = 0.3;
  // Share of tokens in non-owner comments of positive sessions drawn from
  // the bully vocabulary. Zero removes the lexical signal.
  double bully_token_rate = 0.3;
  // When set, positive sessions show "drugs" images and negatives never do.
  bool image_signal = false;
  std::size_t min_comments = 15;
  std::size_t max_comments = 30;
  std::size_t min_tokens = 3;
  std::size_t max_tokens = 10;
  double positive_gap_mean = 900.0;   // seconds between comments
  double negative_gap_mean = 7200.0;
  double owner_comment_rate = 0.1;
  std::size_t n_raters = 5;
  std::size_t rater_pool = 20;
  double flip_rate = 0.1;
  // Chance a rater who did not vote bullying still votes aggression.
  double aggression_extra_rate = 0.1;
  std::size_t image_raters = 3;
};

struct SyntheticCorpus {
  Corpus corpus;
  std::vector<LabelRecord> labels;
  std::vector<ImageVoteRecord> image_votes;
  std::vector<bool> truth;  // ground truth per session, corpus order
  Lexicon profanity;
};

namespace synth {

inline const std::vector<std::string>& bully_vocabulary() {
  static const std::vector<std::string> kWords = {
      "loser", "ugly",   "stupid", "idiot",  "fatso",    "freak",  "dumb",
      "hate",  "pathetic", "worthless", "disgusting", "moron", "creep",
      "weirdo", "trash", "fake",   "gross",  "failure",  "clown",  "bitch",
      "slut",  "whore",  "fuck",   "shit",   "kys"};
  return kWords;
}

inline const std::vector<std::string>& mild_profanity() {
  static const std::vector<std::string> kWords = {"damn", "hell", "crap", "wtf",
                                                  "sucks"};
  return kWords;
}

inline const std::vector<std::string>& filler_stopwords() {
  static const std::vector<std::string> kWords = {"the", "and", "or",  "for",
                                                  "you", "is",  "this", "so",
                                                  "at",  "my"};
  return kWords;
}

// Deterministic pseudo-word vocabulary of consonant-vowel syllables.
inline const std::vector<std::string>& neutral_vocabulary() {
  static const std::vector<std::string> kWords = [] {
    const std::string consonants = "bdfgklmnprstvz";
    const std::string vowels = "aeiou";
    std::vector<std::string> words;
    for (char c1 : consonants) {
      for (char v1 : vowels) {
        for (char c2 : consonants) {
          for (char v2 : {'a', 'o', 'i'}) {
            words.push_back(std::string{c1, v1, c2, v2});
          }
        }
      }
    }
    // Keep a 400-word slice spread over the space.
    std::vector<std::string> out;
    for (std::size_t i = 0; i < words.size() && out.size() < 400; i += 5) {
      out.push_back(words[i]);
    }
    return out;
  }();
  return kWords;
}

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& v) {
  return v[static_cast<std::size_t>(rng.below(v.size()))];
}

inline std::size_t uniform_count(Rng& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng.below(hi - lo + 1));
}

inline std::uint64_t lognormal_count(Rng& rng, double mu, double sigma) {
  return static_cast<std::uint64_t>(std::floor(std::exp(rng.normal(mu, sigma))));
}

inline std::string neutral_text(Rng& rng, std::size_t tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens; ++i) {
    if (!out.empty()) out += ' ';
    out += rng.bernoulli(0.2) ? pick(rng, filler_stopwords())
                              : pick(rng, neutral_vocabulary());
  }
  return out;
}

inline void validate(const SyntheticSpec& spec) {
  auto unit = [](double v, const char* what) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw UsageError(std::string("synthetic spec: ") + what +
                       " must lie in [0, 1]");
    }
  };
  unit(spec.positive_fraction, "positive_fraction");
  unit(spec.bully_token_rate, "bully_token_rate");
  unit(spec.owner_comment_rate, "owner_comment_rate");
  unit(spec.flip_rate, "flip_rate");
  unit(spec.aggression_extra_rate, "aggression_extra_rate");
  if (spec.sessions == 0) throw UsageError("synthetic spec: sessions must be > 0");
  if (spec.min_comments < 1 || spec.min_comments > spec.max_comments) {
    throw UsageError("synthetic spec: need 1 <= min_comments <= max_comments");
  }
  if (spec.min_tokens < 1 || spec.min_tokens > spec.max_tokens) {
    throw UsageError("synthetic spec: need 1 <= min_tokens <= max_tokens");
  }
  if (!(spec.positive_gap_mean > 0.0) || !(spec.negative_gap_mean > 0.0)) {
    throw UsageError("synthetic spec: interarrival means must be positive");
  }
  if (spec.n_raters < 1 || spec.n_raters > spec.rater_pool) {
    throw UsageError("synthetic spec: need 1 <= n_raters <= rater_pool");
  }
  if (spec.image_raters < 1) throw UsageError("synthetic spec: image_raters must be >= 1");
}

}  // namespace synth

/// Generates a corpus with a known ground truth plus matching rater and
/// image-label files. Output is a pure function of (spec, seed).
inline SyntheticCorpus generate_synthetic_corpus(const SyntheticSpec& spec,
                                                 std::uint64_t seed) {
  synth::validate(spec);
  Rng root(seed, "synthetic");
  SyntheticCorpus out;
  out.corpus.provenance = "synthetic seed=" + std::to_string(seed);

  std::vector<std::string> lexicon_words = synth::bully_vocabulary();
  lexicon_words.insert(lexicon_words.end(), synth::mild_profanity().begin(),
                       synth::mild_profanity().end());
  out.profanity = Lexicon::from_patterns("profanity", lexicon_words);

  const auto n_pos = static_cast<std::size_t>(
      std::llround(spec.positive_fraction * static_cast<double>(spec.sessions)));
  out.truth.assign(spec.sessions, false);
  {
    std::vector<std::size_t> idx(spec.sessions);
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    Rng rng = root.stream("assignment");
    rng.shuffle(idx);
    for (std::size_t i = 0; i < n_pos; ++i) out.truth[idx[i]] = true;
  }

  std::vector<std::string> rater_ids;
  std::vector<double> rater_trust;
  {
    Rng rng = root.stream("raters");
    for (std::size_t r = 0; r < spec.rater_pool; ++r) {
      rater_ids.push_back("c" + std::to_string(100 + r));
      rater_trust.push_back(std::round(rng.uniform(0.6, 1.0) * 1000.0) / 1000.0);
    }
  }

  std::vector<std::string> negative_images;
  for (auto c : kImageCategories) {
    if (c != "drugs") negative_images.emplace_back(c);
  }
  std::vector<std::string> all_images(kImageCategories.begin(), kImageCategories.end());

  const std::size_t width = std::to_string(spec.sessions).size();
  for (std::size_t i = 0; i < spec.sessions; ++i) {
    const bool positive = out.truth[i];
    Rng rng = root.stream("session/" + std::to_string(i));
    MediaSession s;
    std::string num = std::to_string(i + 1);
    s.session_id = "s" + std::string(width - num.size(), '0') + num;
    s.owner_id = "u" + std::to_string(10000 + rng.below(90000));
    s.caption = synth::neutral_text(rng, synth::uniform_count(rng, 2, 8));
    s.post_time = 1400000000 + static_cast<std::int64_t>(rng.below(31536000));
    s.owner_stats.followers = synth::lognormal_count(rng, 8.0, 2.0);
    s.owner_stats.following = synth::lognormal_count(rng, 6.0, 1.0);
    s.owner_stats.media_count = synth::lognormal_count(rng, 6.0, 1.0);
    s.owner_stats.likes = synth::lognormal_count(rng, 4.0, 1.0);

    const std::size_t n_comments =
        synth::uniform_count(rng, spec.min_comments, spec.max_comments);
    const double gap_mean = positive ? spec.positive_gap_mean : spec.negative_gap_mean;
    double t = static_cast<double>(s.post_time);
    for (std::size_t c = 0; c < n_comments; ++c) {
      t += rng.exponential(gap_mean);
      Comment cm;
      cm.posted_at = static_cast<std::int64_t>(std::floor(t));
      cm.is_owner = rng.bernoulli(spec.owner_comment_rate);
      cm.author_id = cm.is_owner ? s.owner_id
                                 : "u" + std::to_string(10000 + rng.below(90000));
      const std::size_t n_tokens =
          synth::uniform_count(rng, spec.min_tokens, spec.max_tokens);
      if (positive && !cm.is_owner) {
        std::string text;
        for (std::size_t k = 0; k < n_tokens; ++k) {
          if (!text.empty()) text += ' ';
          if (rng.bernoulli(spec.bully_token_rate)) {
            text += synth::pick(rng, synth::bully_vocabulary());
          } else {
            text += synth::neutral_text(rng, 1);
          }
        }
        cm.text = std::move(text);
      } else {
        cm.text = synth::neutral_text(rng, n_tokens);
      }
      s.comments.push_back(std::move(cm));
    }

    // Every session gets at least one profane non-owner comment, so the
    // corpus survives the session filter intact.
    std::vector<std::size_t> others;
    for (std::size_t c = 0; c < s.comments.size(); ++c) {
      if (!s.comments[c].is_owner) others.push_back(c);
    }
    if (others.empty()) {
      s.comments.front().is_owner = false;
      s.comments.front().author_id = "u" + std::to_string(10000 + rng.below(90000));
      others.push_back(0);
    }
    Comment& target = s.comments[synth::pick(rng, others)];
    const auto& word = positive && spec.bully_token_rate > 0.0
                           ? synth::pick(rng, synth::bully_vocabulary())
                           : synth::pick(rng, synth::mild_profanity());
    target.text += " " + word;

    const std::string category = spec.image_signal
                                     ? (positive ? std::string("drugs")
                                                 : synth::pick(rng, negative_images))
                                     : synth::pick(rng, all_images);
    for (std::size_t r = 0; r < spec.image_raters; ++r) {
      ImageVoteRecord v;
      v.session_id = s.session_id;
      v.rater_id = "img" + std::to_string(r + 1);
      v.categories.push_back(category);
      // Only the second rater ever adds a stray category, so the planted
      // category always keeps a strict majority.
      if (r == 1 && rng.bernoulli(0.2)) {
        const auto& extra = synth::pick(rng, all_images);
        if (extra != category) v.categories.push_back(extra);
      }
      s.image_category_votes.push_back(v.categories);
      out.image_votes.push_back(std::move(v));
    }

    std::vector<std::size_t> pool(spec.rater_pool);
    for (std::size_t r = 0; r < pool.size(); ++r) pool[r] = r;
    rng.shuffle(pool);
    for (std::size_t r = 0; r < spec.n_raters; ++r) {
      LabelRecord rec;
      rec.session_id = s.session_id;
      rec.rater_id = rater_ids[pool[r]];
      rec.trust = rater_trust[pool[r]];
      rec.bullying_vote = positive != rng.bernoulli(spec.flip_rate);
      rec.aggression_vote =
          rec.bullying_vote || rng.bernoulli(spec.aggression_extra_rate);
      out.labels.push_back(std::move(rec));
    }
    out.corpus.sessions.push_back(std::move(s));
  }
  return out;
}

}  // namespace bullyscope

#endif  // BULLYSCOPE_SYNTHETIC_HPP

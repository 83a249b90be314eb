#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include <bullyscope/corpus.hpp>
#include <bullyscope/labels.hpp>
#include <bullyscope/lexicon.hpp>
#include <bullyscope/resources.hpp>
#include <bullyscope/synthetic.hpp>
#include <bullyscope/text.hpp>

using namespace bullyscope;

namespace {

Comment comment(std::string text, std::int64_t t, bool owner = false) {
  return Comment{owner ? "owner" : "u" + std::to_string(t), t, std::move(text), owner};
}

MediaSession session_with(std::string id, std::vector<Comment> comments) {
  MediaSession s;
  s.session_id = std::move(id);
  s.owner_id = "owner";
  s.comments = std::move(comments);
  return s;
}

std::string record(const std::string& id) {
  return R"({"session_id":")" + id +
         R"(","owner_id":"o","caption":"hi","post_time":10,"likes":1,"followers":2,)"
         R"("following":3,"media_count":4,"comments":[{"author_id":"a","posted_at":20,)"
         R"("text":"hello there","is_owner":false}],"image_category_votes":[["person"]]})";
}

LabelRecord vote(std::string rater, bool bully, bool agg, double trust = 1.0,
                 std::string session = "s") {
  return LabelRecord{std::move(session), std::move(rater), trust, agg, bully};
}

}  // namespace

// ---- text --------------------------------------------------------------------

TEST(Tokenize, StatedExamples) {
  EXPECT_EQ(tokenize("You are AWESOME!!"), (std::vector<std::string>{"you", "are", "awesome"}));
  EXPECT_EQ(tokenize(">>> wtf <<<"), (std::vector<std::string>{"wtf"}));
  EXPECT_TRUE(tokenize("").empty());
}

TEST(Tokenize, MentionsAndTagsKeepResidue) {
  EXPECT_EQ(tokenize("@bob #loser!"), (std::vector<std::string>{"bob", "loser"}));
  EXPECT_EQ(tokenize("don't  stop"), (std::vector<std::string>{"don't", "stop"}));
  EXPECT_TRUE(tokenize("!!! ...").empty());
}

// ---- lexicon -----------------------------------------------------------------

TEST(Lexicon, ParsesWildcardsAndDeduplicates) {
  const auto lex = parse_lexicon("sw", "damn\npiss\nkill*\n");
  EXPECT_EQ(lex.size(), 3u);
  EXPECT_EQ(lex.patterns(), (std::vector<std::string>{"damn", "kill*", "piss"}));
  EXPECT_EQ(parse_lexicon("sw", "DAMN\ndamn\n").size(), 1u);
  EXPECT_THROW(parse_lexicon("sw", "# only comments\n\n"), DataError);
}

TEST(Lexicon, RejectsBadPatterns) {
  EXPECT_THROW(parse_lexicon("x", "ki*ll\n"), DataError);
  EXPECT_THROW(parse_lexicon("x", "*\n"), DataError);
  EXPECT_THROW(Lexicon::from_patterns("x", {"two words"}), DataError);
}

TEST(Lexicon, LoadUsesFileStemAsName) {
  const auto path = std::filesystem::temp_directory_path() / "bullyscope_sw_test.txt";
  std::ofstream(path) << "# swear words\ndamn\n";
  const auto lex = load_lexicon(path);
  EXPECT_EQ(lex.name(), "bullyscope_sw_test");
  EXPECT_TRUE(lex.matches("damn"));
  std::filesystem::remove(path);
}

TEST(Negativity, TaggingExamples) {
  const auto damn = parse_lexicon("p", "damn\n");
  const auto kill = parse_lexicon("p", "kill*\n");
  EXPECT_FALSE(tag_comment_negative(comment("you are awesome", 0), damn));
  EXPECT_TRUE(tag_comment_negative(comment("DAMN you", 0), damn));
  EXPECT_TRUE(tag_comment_negative(comment("killing it", 0), kill));
  EXPECT_FALSE(tag_comment_negative(comment("skill", 0), kill));
}

TEST(Negativity, MonotoneInLexicon) {
  const auto small = parse_lexicon("p", "damn\n");
  const auto large = parse_lexicon("p", "damn\nhell\nkill*\n");
  for (const char* text : {"damn it", "what the hell", "killer", "nice", "oh damn hell"}) {
    if (tag_comment_negative(comment(text, 0), small)) {
      EXPECT_TRUE(tag_comment_negative(comment(text, 0), large)) << text;
    }
  }
}

TEST(Negativity, SessionPercentage) {
  const auto lex = parse_lexicon("p", "damn\n");
  auto s = session_with("a", {comment("damn", 1), comment("ok", 2), comment("fine", 3),
                              comment("good", 4)});
  EXPECT_DOUBLE_EQ(session_negativity_pct(s, lex), 25.0);
  s.comments[0].text = "nice";
  EXPECT_DOUBLE_EQ(session_negativity_pct(s, lex), 0.0);
  const auto all = session_with("b", {comment("damn", 1), comment("damn", 2), comment("damn", 3)});
  EXPECT_DOUBLE_EQ(session_negativity_pct(all, lex), 100.0);
  EXPECT_THROW(session_negativity_pct(session_with("c", {}), lex), DataError);
}

TEST(CategoryCounts, StatedExamples) {
  const auto cats = parse_category_lexicon("swear: damn\nnegation: never\n");
  const auto s = session_with("a", {comment("damn you", 1), comment("never again", 2)});
  const auto c = category_counts(s, cats);
  EXPECT_EQ(c.counts.at("swear"), 1u);
  EXPECT_EQ(c.counts.at("negation"), 1u);
  EXPECT_EQ(c.word_count, 4u);

  const auto empty = category_counts(session_with("b", {}), cats);
  EXPECT_EQ(empty.counts.at("swear"), 0u);
  EXPECT_EQ(empty.word_count, 0u);
}

TEST(CategoryCounts, OverlappingCategoriesCountIndependently) {
  const auto cats = parse_category_lexicon("anger: hate*\nnegemo: hate\n");
  const auto c = category_counts(session_with("a", {comment("hate hate", 1)}), cats);
  EXPECT_EQ(c.counts.at("anger"), 2u);
  EXPECT_EQ(c.counts.at("negemo"), 2u);
}

TEST(CategoryCounts, AdditiveOverCommentPartitions) {
  const auto cats = resources::demo_categories();
  const auto whole = session_with("a", {comment("i hate you never", 1), comment("god damn", 2),
                                        comment("we love it", 3)});
  const auto left = session_with("a", {whole.comments[0]});
  const auto right = session_with("a", {whole.comments[1], whole.comments[2]});
  const auto w = category_counts(whole, cats), l = category_counts(left, cats),
             r = category_counts(right, cats);
  for (const auto& [name, n] : w.counts) EXPECT_EQ(n, l.counts.at(name) + r.counts.at(name));
  EXPECT_EQ(w.word_count, l.word_count + r.word_count);
}

TEST(CategoryLexicon, DuplicateCategoryIsError) {
  EXPECT_THROW(parse_category_lexicon("a: x\na: y\n"), DataError);
}

TEST(Resources, BundledListsLoad) {
  const auto stop = resources::default_stopwords();
  EXPECT_GE(stop.size(), 100u);
  EXPECT_TRUE(stop.matches("and"));
  EXPECT_TRUE(stop.matches("for"));
  EXPECT_GE(resources::demo_categories().categories.size(), 10u);
}

// ---- corpus ------------------------------------------------------------------

TEST(Corpus, ParsesValidLines) {
  const auto c = parse_corpus(record("a") + "\n" + record("b") + "\n" + record("c") + "\n", "mem");
  EXPECT_EQ(c.sessions.size(), 3u);
  EXPECT_TRUE(c.ingest_warnings.empty());
  EXPECT_EQ(c.sessions[1].session_id, "b");
  EXPECT_EQ(c.sessions[0].owner_stats.media_count, 4u);
  EXPECT_EQ(c.sessions[0].image_category_votes.size(), 1u);
}

TEST(Corpus, SkipsTruncatedLineWithWarning) {
  const std::string truncated = record("c").substr(0, 40);
  const auto c = parse_corpus(record("a") + "\n" + record("b") + "\n" + truncated + "\n", "mem");
  EXPECT_EQ(c.sessions.size(), 2u);
  EXPECT_EQ(c.ingest_warnings.size(), 1u);
}

TEST(Corpus, DuplicateIdIsErrorNamingId) {
  try {
    parse_corpus(record("dup") + "\n" + record("dup") + "\n", "mem");
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("dup"), std::string::npos);
  }
}

TEST(Corpus, EmptyInputIsError) {
  EXPECT_THROW(parse_corpus("\n\n", "mem"), DataError);
  EXPECT_THROW(parse_corpus("{not json\n", "mem"), DataError);
}

TEST(Corpus, SortsCommentsAndWarns) {
  const std::string line =
      R"({"session_id":"x","owner_id":"o","caption":"","post_time":100,"likes":0,)"
      R"("followers":0,"following":0,"media_count":0,"comments":[)"
      R"({"author_id":"a","posted_at":50,"text":"late","is_owner":false},)"
      R"({"author_id":"b","posted_at":20.7,"text":"early","is_owner":false}]})";
  const auto c = parse_corpus(line + "\n", "mem");
  ASSERT_EQ(c.sessions[0].comments.size(), 2u);
  EXPECT_EQ(c.sessions[0].comments[0].text, "early");
  EXPECT_EQ(c.sessions[0].comments[0].posted_at, 20);
  // Re-sorted, plus post_time after first comment.
  EXPECT_EQ(c.ingest_warnings.size(), 2u);
}

TEST(Corpus, MissingStatsBecomeZeroWithWarning) {
  const auto c = parse_corpus(
      R"({"session_id":"x","post_time":0,"comments":[]})"
      "\n",
      "mem");
  EXPECT_EQ(c.sessions[0].owner_stats.likes, 0u);
  EXPECT_EQ(c.ingest_warnings.size(), 4u);
}

TEST(Corpus, UnknownFieldWarns) {
  std::string line = record("a");
  line.insert(1, R"("mood":"sunny",)");
  const auto c = parse_corpus(line + "\n", "mem");
  ASSERT_EQ(c.ingest_warnings.size(), 1u);
  EXPECT_NE(c.ingest_warnings[0].find("mood"), std::string::npos);
}

TEST(Corpus, NegativeTimestampSkipsRecord) {
  std::string bad = record("bad");
  bad.replace(bad.find("\"post_time\":10"), 14, "\"post_time\":-5");
  const auto c = parse_corpus(record("a") + "\n" + bad + "\n", "mem");
  EXPECT_EQ(c.sessions.size(), 1u);
  EXPECT_EQ(c.ingest_warnings.size(), 1u);
}

TEST(Corpus, WriteLoadRoundTrip) {
  const auto synth = generate_synthetic_corpus({.sessions = 20}, 3);
  const auto path = std::filesystem::temp_directory_path() / "bullyscope_roundtrip.jsonl";
  write_corpus(synth.corpus, path);
  const auto back = load_corpus(path);
  EXPECT_EQ(back.sessions, synth.corpus.sessions);
  EXPECT_TRUE(back.ingest_warnings.empty());
  std::filesystem::remove(path);
}

TEST(Filter, StatedExamples) {
  const auto lex = parse_lexicon("p", "damn\n");
  auto make = [](std::string id, std::size_t n, bool owner_profane, bool other_profane) {
    std::vector<Comment> cs;
    for (std::size_t i = 0; i < n; ++i) cs.push_back(comment("fine", static_cast<int>(i)));
    if (owner_profane) cs[0] = comment("damn", 0, true);
    if (other_profane) cs[1] = comment("damn it", 1);
    return session_with(std::move(id), std::move(cs));
  };
  Corpus c;
  c.sessions = {make("short", 14, false, true), make("owner", 15, true, false),
                make("ok", 15, false, true)};
  const auto out = filter_sessions(c, 15, lex);
  ASSERT_EQ(out.sessions.size(), 1u);
  EXPECT_EQ(out.sessions[0].session_id, "ok");
  EXPECT_EQ(filter_sessions(out, 15, lex).sessions, out.sessions);
  EXPECT_THROW(filter_sessions(c, 0, lex), UsageError);
}

TEST(Truncate, StatedExamples) {
  std::vector<Comment> cs;
  for (int i = 0; i < 20; ++i) cs.push_back(comment("c" + std::to_string(i), i));
  auto s = session_with("a", cs);
  s.caption = "cap";
  s.post_time = 7;
  const auto five = truncate_comments(s, 5);
  ASSERT_EQ(five.comments.size(), 5u);
  EXPECT_EQ(five.comments[4].text, "c4");
  EXPECT_EQ(truncate_comments(session_with("b", {cs[0], cs[1], cs[2]}), 10).comments.size(), 3u);
  const auto none = truncate_comments(s, 0);
  EXPECT_TRUE(none.comments.empty());
  EXPECT_EQ(none.caption, "cap");
  EXPECT_EQ(none.post_time, 7);
  EXPECT_EQ(truncate_comments(truncate_comments(s, 10), 4), truncate_comments(s, 4));
}

// ---- synthetic -----------------------------------------------------------------

TEST(Synthetic, ExactPositiveCountAndDeterminism) {
  SyntheticSpec spec{.sessions = 100, .positive_fraction = 0.3};
  const auto a = generate_synthetic_corpus(spec, 7);
  const auto b = generate_synthetic_corpus(spec, 7);
  EXPECT_EQ(std::count(a.truth.begin(), a.truth.end(), true), 30);
  EXPECT_EQ(corpus_to_jsonl(a.corpus), corpus_to_jsonl(b.corpus));
  EXPECT_EQ(label_records_to_jsonl(a.labels), label_records_to_jsonl(b.labels));
  const auto c = generate_synthetic_corpus(spec, 8);
  EXPECT_NE(corpus_to_jsonl(a.corpus), corpus_to_jsonl(c.corpus));
}

TEST(Synthetic, ZeroFlipRateVotesEqualTruth) {
  SyntheticSpec spec{.sessions = 50, .flip_rate = 0.0};
  const auto s = generate_synthetic_corpus(spec, 1);
  std::map<std::string, bool> truth;
  for (std::size_t i = 0; i < s.corpus.sessions.size(); ++i) {
    truth[s.corpus.sessions[i].session_id] = s.truth[i];
  }
  for (const auto& r : s.labels) EXPECT_EQ(r.bullying_vote, truth.at(r.session_id));
}

TEST(Synthetic, FlipRateGivesBinomialMeanVotes) {
  // 1000 positive sessions, 5 raters, flip 0.2: E[yes] = 4.0, sd of mean ~0.028.
  SyntheticSpec spec{.sessions = 1000, .positive_fraction = 1.0, .min_comments = 2,
                     .max_comments = 3, .flip_rate = 0.2};
  const auto s = generate_synthetic_corpus(spec, 11);
  double yes = 0;
  for (const auto& r : s.labels) yes += r.bullying_vote ? 1.0 : 0.0;
  EXPECT_NEAR(yes / 1000.0, 4.0, 0.15);
}

TEST(Synthetic, SessionsPassTheCorpusFilter) {
  const auto s = generate_synthetic_corpus({.sessions = 60}, 5);
  EXPECT_EQ(filter_sessions(s.corpus, 15, s.profanity).sessions.size(), 60u);
}

TEST(Synthetic, InvalidSpecRejected) {
  EXPECT_THROW(generate_synthetic_corpus({.positive_fraction = 1.5}, 1), UsageError);
  EXPECT_THROW(generate_synthetic_corpus({.min_comments = 10, .max_comments = 5}, 1), UsageError);
}

// ---- labels ------------------------------------------------------------------

TEST(Aggregate, StatedExamples) {
  const std::vector<LabelRecord> three{vote("a", 1, 1), vote("b", 1, 1), vote("c", 1, 1),
                                       vote("d", 0, 0), vote("e", 0, 0)};
  const auto l = aggregate_votes(three);
  EXPECT_EQ(l.bullying_votes, 3u);
  EXPECT_TRUE(l.is_bullying);
  EXPECT_NEAR(l.bullying_confidence, 0.6, 1e-15);

  const std::vector<LabelRecord> weighted{vote("a", 1, 0, 0.9), vote("b", 1, 0, 0.9),
                                          vote("c", 0, 0, 0.5), vote("d", 0, 0, 0.5),
                                          vote("e", 0, 0, 0.5)};
  const auto w = aggregate_votes(weighted);
  EXPECT_FALSE(w.is_bullying);
  EXPECT_NEAR(w.bullying_confidence, 1.8 / 3.3, 1e-12);

  std::vector<LabelRecord> all;
  for (const char* r : {"a", "b", "c", "d", "e"}) all.push_back(vote(r, 1, 1));
  const auto u = aggregate_votes(all);
  EXPECT_TRUE(u.is_bullying);
  EXPECT_EQ(u.bullying_confidence, 1.0);
}

TEST(Aggregate, TiedTrustMassGoesToNoSide) {
  const std::vector<LabelRecord> tie{vote("a", 1, 1), vote("b", 0, 0)};
  const auto l = aggregate_votes(tie);
  EXPECT_FALSE(l.is_bullying);
  EXPECT_EQ(l.bullying_confidence, 0.5);
}

TEST(Aggregate, Errors) {
  EXPECT_THROW(aggregate_votes(std::vector<LabelRecord>{}), DataError);
  EXPECT_THROW(aggregate_votes(std::vector<LabelRecord>{vote("a", 1, 1), vote("a", 0, 0)}),
               DataError);
  EXPECT_THROW(aggregate_votes(std::vector<LabelRecord>{vote("a", 1, 1, 0.0)}), DataError);
  EXPECT_THROW(aggregate_votes(std::vector<LabelRecord>{vote("a", 1, 1, 1.0, "x"),
                                                        vote("b", 1, 1, 1.0, "y")}),
               DataError);
}

TEST(Aggregate, ViolationsReported) {
  std::vector<LabelRecord> recs{vote("a", 1, 0, 1.0, "s1"), vote("b", 0, 0, 1.0, "s1"),
                                vote("a", 1, 1, 1.0, "s2")};
  const auto r = aggregate_all(recs);
  ASSERT_EQ(r.labels.size(), 2u);
  EXPECT_EQ(r.violations, (std::vector<std::string>{"s1"}));
}

TEST(Aggregate, MajorityImpliesVoteBound) {
  for (std::size_t n = 1; n <= 7; ++n) {
    for (std::size_t yes = 0; yes <= n; ++yes) {
      std::vector<LabelRecord> recs;
      for (std::size_t i = 0; i < n; ++i) recs.push_back(vote("r" + std::to_string(i), i < yes, true));
      const auto l = aggregate_votes(recs);
      if (l.is_bullying) {
        EXPECT_GE(l.bullying_votes, (n + 2) / 2);
      }
    }
  }
}

TEST(ConfidenceFilter, StatedExamples) {
  AggregatedLabel at{.session_id = "a", .bullying_confidence = 0.6};
  AggregatedLabel below{.session_id = "b", .bullying_confidence = 1.8 / 3.3};
  const std::vector<AggregatedLabel> all{at, below};
  const auto kept = filter_by_confidence(all, 0.6);
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_EQ(kept[0].session_id, "a");
  EXPECT_EQ(filter_by_confidence(all, 0.0).size(), 2u);
  EXPECT_THROW(filter_by_confidence(all, 1.5), UsageError);
}

TEST(ConfidenceFilter, ThreeOfFiveSurvivesRounding) {
  std::vector<LabelRecord> recs;
  for (int i = 0; i < 5; ++i) recs.push_back(vote("r" + std::to_string(i), i < 3, i < 3, 0.7));
  const auto l = aggregate_votes(recs);
  EXPECT_EQ(filter_by_confidence(std::vector<AggregatedLabel>{l}, 0.6).size(), 1u);
}

TEST(Kappa, HandFixture) {
  const std::vector<std::size_t> yes{5, 0, 3};
  const double pe = (8.0 / 15) * (8.0 / 15) + (7.0 / 15) * (7.0 / 15);
  EXPECT_NEAR(fleiss_kappa(yes, 5), (0.8 - pe) / (1 - pe), 1e-12);
  EXPECT_NEAR(fleiss_kappa(yes, 5), 0.5982, 1e-4);
}

TEST(Kappa, PerfectAgreementAndUndefined) {
  EXPECT_EQ(fleiss_kappa(std::vector<std::size_t>{5, 5, 0, 0}, 5), 1.0);
  EXPECT_THROW(fleiss_kappa(std::vector<std::size_t>{5, 5, 5}, 5), NumericError);
  EXPECT_THROW(fleiss_kappa(std::vector<std::size_t>{}, 5), DataError);
  EXPECT_THROW(fleiss_kappa(std::vector<std::size_t>{6}, 5), DataError);
}

TEST(Kappa, PermutationInvariantAndBounded) {
  std::vector<std::size_t> yes{0, 1, 2, 3, 4, 5, 2, 2};
  const double k = fleiss_kappa(yes, 5);
  std::reverse(yes.begin(), yes.end());
  EXPECT_DOUBLE_EQ(fleiss_kappa(yes, 5), k);
  EXPECT_LE(k, 1.0);
}

TEST(ImageMajority, StatedExamples) {
  EXPECT_EQ(image_category_majority({{"person"}, {"person", "text"}, {"text"}}).category, "person");
  EXPECT_EQ(image_category_majority({{"drugs"}, {"drugs"}, {"car"}}).category, "drugs");
  EXPECT_EQ(image_category_majority({{"unknown"}, {"unknown"}, {"unknown"}}).category, "unknown");
}

TEST(ImageMajority, DontKnowMapsToUnknownAndTiesListed) {
  const auto l = image_category_majority({{"don't know"}, {"Person"}, {"person"}});
  EXPECT_EQ(l.category, "person");
  EXPECT_EQ(l.vote_counts.at("unknown"), 1u);
  const auto t = image_category_majority({{"text"}, {"car"}});
  EXPECT_EQ(t.tied, (std::vector<std::string>{"car", "text"}));
  EXPECT_EQ(t.category, "car");
}

TEST(LabelFiles, RawAndAggregatedAutoDetected) {
  std::vector<LabelRecord> recs{vote("a", 1, 1, 1.0, "s1"), vote("b", 1, 1, 1.0, "s1"),
                                vote("c", 0, 1, 1.0, "s1")};
  const std::string raw = label_records_to_jsonl(recs);
  const auto from_raw = parse_any_labels(raw);
  ASSERT_EQ(from_raw.size(), 1u);
  EXPECT_TRUE(from_raw[0].is_bullying);
  const auto from_agg = parse_any_labels(aggregated_to_jsonl(from_raw));
  ASSERT_EQ(from_agg.size(), 1u);
  EXPECT_EQ(from_agg[0].bullying_votes, 2u);
  EXPECT_EQ(from_agg[0].bullying_confidence, from_raw[0].bullying_confidence);
}

TEST(LabelFiles, DuplicateRaterRejected) {
  const std::string line = R"({"session_id":"s","rater_id":"r","trust":1,"aggression_vote":true,"bullying_vote":false})";
  EXPECT_THROW(parse_label_records(line + "\n" + line + "\n"), DataError);
}

TEST(ImageFiles, ResolveVotes) {
  const std::string text =
      R"({"session_id":"s1","rater_id":"a","categories":["drugs"]})"
      "\n"
      R"({"session_id":"s1","rater_id":"b","categories":["drugs","car"]})"
      "\n";
  const auto labels = resolve_image_votes(parse_image_votes(text));
  EXPECT_EQ(labels.at("s1").category, "drugs");
  EXPECT_EQ(image_votes_to_jsonl(parse_image_votes(text)), text);
}

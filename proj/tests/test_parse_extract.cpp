#include <gtest/gtest.h>

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "poemotion/conllu.hpp"
#include "poemotion/extract.hpp"
#include "test_util.hpp"

namespace poemotion {
namespace {

std::vector<DepSentence> parse(const std::string& text) {
  std::istringstream in(text);
  return parse_conllu(in);
}

std::string row(int id, const std::string& form, const std::string& upos, int head,
                const std::string& rel) {
  return std::to_string(id) + "\t" + form + "\t" + form + "\t" + upos + "\t_\t_\t" +
         std::to_string(head) + "\t" + rel + "\t_\t_\n";
}

TEST(ParseConllu, DirectFieldMapping) {
  auto s = parse("1\tShe\tshe\tPRON\t_\t_\t2\tnsubj\t_\t_\n2\tsleeps\tsleep\tVERB\t_\t_\t0\troot\t_\t_");
  ASSERT_EQ(s.size(), 1u);
  ASSERT_EQ(s[0].tokens.size(), 2u);
  EXPECT_EQ(s[0].tokens[0], (DepToken{1, "She", "she", "PRON", 2, "nsubj"}));
  EXPECT_EQ(s[0].tokens[1], (DepToken{2, "sleeps", "sleep", "VERB", 0, "root"}));
}

TEST(ParseConllu, CommentsAreSkippedAndTextKept) {
  auto s = parse("# text = She sleeps\n" + row(1, "She", "PRON", 2, "nsubj") +
                 row(2, "sleeps", "VERB", 0, "root"));
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].tokens.size(), 2u);
  EXPECT_EQ(s[0].text_hint, "She sleeps");
}

TEST(ParseConllu, SkipsMultiwordAndEmptyNodes) {
  auto s = parse("1-2\tdon't\t_\t_\t_\t_\t_\t_\t_\t_\n" + row(1, "do", "AUX", 2, "aux") +
                 row(2, "n't", "PART", 0, "root") + "2.1\tx\tx\tX\t_\t_\t_\t_\t_\t_\n");
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].tokens.size(), 2u);
}

TEST(ParseConllu, CrlfAndMultipleBlocks) {
  std::string a = row(1, "Rain", "NOUN", 0, "root");
  std::string b = row(1, "Snow", "NOUN", 0, "root");
  a.insert(a.size() - 1, "\r");
  auto s = parse(a + "\r\n\n\n" + b);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].tokens[0].deprel, "root");
  EXPECT_EQ(s[1].tokens[0].form, "Snow");
}

TEST(ParseConllu, WrongColumnCountNamesLine) {
  const std::string text = "# c\n" + row(1, "a", "X", 0, "root") + "2\tb\tb\tX\t_\t_\t1\tdep\t_\n";
  try {
    parse(text);
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(ParseConllu, NonIntegerFields) {
  EXPECT_THROW(parse("x\ta\ta\tX\t_\t_\t0\troot\t_\t_\n"), FormatError);
  EXPECT_THROW(parse("1\ta\ta\tX\t_\t_\tzero\troot\t_\t_\n"), FormatError);
}

TEST(ParseConllu, TreeErrors) {
  try {
    parse(row(1, "a", "X", 2, "dep") + row(2, "b", "X", 1, "dep"));
    FAIL();
  } catch (const TreeError& e) {
    EXPECT_EQ(e.line(), 1u);  // no root: reported at the block start
  }
  try {
    parse(row(1, "a", "X", 0, "root") + row(2, "b", "X", 0, "root"));
    FAIL();
  } catch (const TreeError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  try {
    parse(row(1, "a", "X", 0, "root") + row(2, "b", "X", 3, "dep") + row(3, "c", "X", 2, "dep"));
    FAIL();
  } catch (const TreeError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse(row(1, "a", "X", 0, "root") + row(2, "b", "X", 7, "dep")), TreeError);
  EXPECT_THROW(parse(row(1, "a", "X", 0, "root") + row(2, "b", "X", 2, "dep")), TreeError);
}

TEST(ParseConllu, FixtureCorpus) {
  std::ifstream in(testing::kDataDir / "poem.conllu");
  auto sents = parse_conllu(in);
  ASSERT_EQ(sents.size(), 10u);
  EXPECT_EQ(sents[0].text_hint, "The old moon rises over the silent hills.");
  EXPECT_EQ(sents[9].tokens.size(), 7u);
}

struct Expected {
  std::string text;
  SegmentKind kind;
  std::vector<int> ids;
};

void expect_segments(const std::vector<SemanticSegment>& got, const std::vector<Expected>& want) {
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    EXPECT_EQ(got[i].text, want[i].text) << i;
    EXPECT_EQ(got[i].kind, want[i].kind) << i;
    EXPECT_EQ(got[i].token_ids, want[i].ids) << i;
  }
}

// The expected token sets below were worked out by hand from each tree.
TEST(ExtractSegments, SubjectObjectAndVerbPhrase) {
  auto s = parse(row(1, "She", "PRON", 2, "nsubj") + row(2, "reads", "VERB", 0, "root") +
                 row(3, "old", "ADJ", 4, "amod") + row(4, "books", "NOUN", 2, "obj"));
  expect_segments(extract_segments(s[0], 0),
                  {{"She", SegmentKind::NounPhrase, {1}},
                   {"reads old books", SegmentKind::VerbPhrase, {2, 3, 4}},
                   {"old books", SegmentKind::NounPhrase, {3, 4}}});
}

TEST(ExtractSegments, CoordinatedVerbs) {
  auto s = parse(row(1, "sings", "VERB", 0, "root") + row(2, "and", "CCONJ", 3, "cc") +
                 row(3, "dances", "VERB", 1, "conj"));
  expect_segments(extract_segments(s[0], 4), {{"sings", SegmentKind::VerbPhrase, {1}},
                                               {"dances", SegmentKind::VerbPhrase, {3}}});
  EXPECT_EQ(extract_segments(s[0], 4)[0].sentence_id, 4u);
}

TEST(ExtractSegments, NominalRootYieldsNoVerbPhrase) {
  auto s = parse(row(1, "The", "DET", 2, "det") + row(2, "night", "NOUN", 4, "nsubj") +
                 row(3, "so", "ADV", 4, "advmod") + row(4, "cold", "ADJ", 0, "root"));
  auto segs = extract_segments(s[0], 0);
  expect_segments(segs, {{"The night", SegmentKind::NounPhrase, {1, 2}}});
}

TEST(ExtractSegments, ModifierClosureStopsAtOtherRelations) {
  // "the king 's old sword of iron that shines" as object of "holds".
  auto s = parse(row(1, "He", "PRON", 2, "nsubj") + row(2, "holds", "VERB", 0, "ROOT") +
                 row(3, "the", "DET", 4, "det") + row(4, "king", "NOUN", 7, "poss") +
                 row(5, "'s", "PART", 4, "case") + row(6, "old", "ADJ", 7, "amod") +
                 row(7, "sword", "NOUN", 2, "dobj") + row(8, "that", "PRON", 9, "nsubj") +
                 row(9, "shines", "VERB", 7, "acl:relcl"));
  expect_segments(extract_segments(s[0], 0),
                  {{"He", SegmentKind::NounPhrase, {1}},
                   {"holds the king 's old sword that shines", SegmentKind::VerbPhrase,
                    {2, 3, 4, 5, 6, 7, 8, 9}},
                   {"the king 's old sword", SegmentKind::NounPhrase, {3, 4, 5, 6, 7}},
                   {"that", SegmentKind::NounPhrase, {8}}});
}

TEST(ExtractSegments, XcompJoinsVerbPhrase) {
  auto s = parse(row(1, "Birds", "NOUN", 2, "nsubj") + row(2, "start", "VERB", 0, "root") +
                 row(3, "singing", "VERB", 2, "xcomp") + row(4, "songs", "NOUN", 3, "obj"));
  expect_segments(extract_segments(s[0], 0),
                  {{"Birds", SegmentKind::NounPhrase, {1}},
                   {"start singing songs", SegmentKind::VerbPhrase, {2, 3, 4}},
                   {"songs", SegmentKind::NounPhrase, {4}}});
}

bool connected(const DepSentence& s, const std::vector<int>& ids) {
  // Exactly one member may have its head outside the set.
  int outside = 0;
  for (int id : ids)
    if (std::find(ids.begin(), ids.end(), s.token(id).head) == ids.end()) ++outside;
  return outside == 1;
}

TEST(ExtractSegments, FixtureInvariants) {
  std::ifstream in(testing::kDataDir / "poem.conllu");
  const auto sents = parse_conllu(in);
  for (std::size_t i = 0; i < sents.size(); ++i) {
    const auto segs = extract_segments(sents[i], i);
    EXPECT_FALSE(segs.empty());
    std::set<std::vector<int>> seen;
    for (std::size_t k = 0; k < segs.size(); ++k) {
      const auto& seg = segs[k];
      EXPECT_FALSE(seg.token_ids.empty());
      EXPECT_TRUE(std::is_sorted(seg.token_ids.begin(), seg.token_ids.end()));
      EXPECT_TRUE(seen.insert(seg.token_ids).second);
      EXPECT_TRUE(connected(sents[i], seg.token_ids)) << seg.text;
      std::string joined;
      for (int id : seg.token_ids) joined += (joined.empty() ? "" : " ") + sents[i].token(id).form;
      EXPECT_EQ(seg.text, joined);
      if (k > 0) {
        EXPECT_LE(segs[k - 1].first_token(), seg.first_token());
      }
    }
    EXPECT_EQ(segs, extract_segments(sents[i], i));
  }
}

TEST(WholeSentenceSegment, FallbackIsNounPhrase) {
  Sentence s{3, "soft   rain\tfalls", {0, 0}};
  auto seg = whole_sentence_segment(s);
  EXPECT_EQ(seg.text, "soft rain falls");
  EXPECT_EQ(seg.kind, SegmentKind::NounPhrase);
  EXPECT_EQ(seg.sentence_id, 3u);
  EXPECT_EQ(seg.token_ids, (std::vector<int>{1, 2, 3}));
}

}  // namespace
}  // namespace poemotion

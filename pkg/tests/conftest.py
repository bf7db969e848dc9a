"""Shared fixtures: published sample tweets and small corpus builders."""

from __future__ import annotations

import json

import pytest

from selfage import Label, LabeledPost, Post
from selfage.corpus import parse_timestamp, post_to_record

# Annotated examples of age (+) and no-age (-) posts. The age column is the
# user's age at posting time, which is not always the number in the text.
ANNOTATED_SAMPLES = [
    ("It's my 21st birthday today. But who cares..... ITS FINALLY AUGUST!!!!",
     Label.AGE, 21),
    ("It's crazy, tomorrow I'll be 20. I'm getting so OLD.", Label.AGE, 19),
    ("can't believe im going to be 21 i want to be a teenager again",
     Label.AGE, 20),
    ("I graduate in May only focusing on me and my child.. watch me at 21",
     Label.NO_AGE, None),
    ("Had just turned 18 then found out I was pregnant 2 weeks later",
     Label.NO_AGE, None),
]

# Golden extraction suite: each text states an exact age once the right
# arithmetic is applied, spanning every rule family in the cascade.
GOLDEN_EXTRACTIONS = [
    ("Two more years until my 21st birthday! Can't wait! #surprise", 19),
    ("It's my 18th birthday! And we have to go to school", 18),
    ("excited for my 18th but also don't want to grow up", 17),
    ("I started having #depression 20 yrs ago at the age of 19.", 39),
    ("I started at 28 and I'm currently doing a PhD at 35.", 35),
    ("i feel like i'm going through a midlife crisis at the age of 21", 21),
    ("I've turned 21 three times now. I don't think I can turn it a 4th.", 23),
    ("I'm right there with you. Recently turned 47.", 47),
    ("I was just reminded that I'm turning 18 in 3 weeks I feel old", 17),
    ("I'm going out for the first time tonight since turning 21", 21),
]

# Known hard cases: (text, gold age or None, predicted age or None). The
# prediction column records what the cascade is expected to produce, even
# where that disagrees with the gold annotation.
ERROR_ANALYSIS_SAMPLES = [
    ("Blessed to see my 22nd birthday! I feel good to be alive.", 22, 21),
    ("The most exciting part of turning 25 is that my insurance is dropping"
     " 20 bucks per month.", 25, 24),
    ("Got to love Facebook for reminding me of my 21st bday cruise", None, 20),
    ("Who will be going to two 21st birthdays next week and doesn't have"
     " anything nothing to wear?! ME", None, 20),
    ("Big 30 coming up on the 31st", 29, None),
]

# Texts that the high-recall query patterns must not match.
RETRIEVAL_NEGATIVES = [
    "hello world",
    "I am 150 years old",
]

AGE_TEMPLATES = [
    "I'm {} years old today and loving it",
    "its my {}th birthday today woohoo",
    "I turned {} yesterday, still feel young",
    "happy birthday to me, I am {} now",
    "I'm officially {} today! Cake time",
]

NO_AGE_TEMPLATES = [
    "ate {} chicken nuggets for lunch",
    "scored {} points in the game last night",
    "my bus was {} minutes late again",
    "bought {} new plants for the garden",
    "drove {} miles to see the show",
]


def make_post(post_id="p1", text="hello", user_id="u1",
              created_at="2020-05-01T12:00:00Z", is_retweet=False) -> Post:
    return Post(id=post_id, user_id=user_id,
                created_at=parse_timestamp(created_at),
                text=text, is_retweet=is_retweet)


def make_labeled_corpus(n=60, start_age=14) -> list[LabeledPost]:
    """Separable corpus: age posts use birthday phrasing, the rest do not."""
    out = []
    for i in range(n):
        age = start_age + (i % 50)
        if i % 2 == 0:
            text = AGE_TEMPLATES[i % len(AGE_TEMPLATES)].format(age)
            out.append(LabeledPost(post=make_post(f"t{i}", text, f"u{i}"),
                                   label=Label.AGE, age=age))
        else:
            text = NO_AGE_TEMPLATES[i % len(NO_AGE_TEMPLATES)].format(age)
            out.append(LabeledPost(post=make_post(f"t{i}", text, f"u{i}"),
                                   label=Label.NO_AGE))
    return out


def write_posts_jsonl(path, posts) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for post in posts:
            handle.write(json.dumps(post_to_record(post)) + "\n")


@pytest.fixture
def labeled_corpus():
    return make_labeled_corpus()


@pytest.fixture
def golden_posts():
    return [make_post(f"g{i}", text, f"gu{i}")
            for i, (text, _) in enumerate(GOLDEN_EXTRACTIONS)]

import { describe, expect, it } from "vitest";

import { normalizeForContextualClassifier, tokenize } from "../src/normalize.js";

// Frozen against the host pipeline's contextual normalizer so both sides
// of the wire agree on what the model sees.
const PARITY: [string, string][] = [
  ["I'm 21 today @bestFriend", "i'm 21 today <user>"],
  ["see https://a.b/c. wow", "see <url>. wow"],
  ["check www.example.com now", "check <url> now"],
  [
    "Happy birthday to ME! http://t.co/xyz #blessed",
    "happy birthday to me! <url> #blessed",
  ],
  ["x.co@m", "x.co<user>"],
  [
    "plain text with digits 42 and punctuation!?",
    "plain text with digits 42 and punctuation!?",
  ],
  ["@a @b @c stacked mentions", "<user> <user> <user> stacked mentions"],
  ["URL at end http://pics.example.com/cake", "url at end <url>"],
  ["birthday.My plans are big", "birthday.my plans are big"],
  ["IT'S MY 21ST BIRTHDAY", "it's my 21st birthday"],
];

describe("normalizeForContextualClassifier", () => {
  it.each(PARITY)("matches the host normalizer on %j", (raw, expected) => {
    expect(normalizeForContextualClassifier(raw)).toBe(expected);
  });

  it("is idempotent on the parity fixtures", () => {
    for (const [raw] of PARITY) {
      const once = normalizeForContextualClassifier(raw);
      expect(normalizeForContextualClassifier(once)).toBe(once);
    }
  });
});

describe("tokenize", () => {
  it("keeps sentinels whole and drops bare punctuation", () => {
    expect(tokenize("i'm 21 today <user>!")).toEqual([
      "i'm",
      "21",
      "today",
      "<user>",
    ]);
  });

  it("keeps ordinal digits attached to their suffix", () => {
    expect(tokenize("it's my 21st birthday")).toEqual([
      "it's",
      "my",
      "21st",
      "birthday",
    ]);
  });

  it("returns no tokens for empty or punctuation-only text", () => {
    expect(tokenize("")).toEqual([]);
    expect(tokenize("?!... ---")).toEqual([]);
  });
});

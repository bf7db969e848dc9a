import { describe, expect, it } from "vitest";

import { PAD_TOKEN, UNK_TOKEN, buildVocab, encode } from "../src/tokenizer.js";

describe("buildVocab", () => {
  it("reserves index 0 for padding and 1 for unknowns", () => {
    const vocab = buildVocab(["i'm 21 years old"]);
    expect(vocab[PAD_TOKEN]).toBe(0);
    expect(vocab[UNK_TOKEN]).toBe(1);
    expect(vocab["i'm"]).toBeGreaterThan(1);
  });

  it("assigns one id per distinct token", () => {
    const vocab = buildVocab(["a b a", "b c"]);
    const ids = Object.values(vocab);
    expect(new Set(ids).size).toBe(ids.length);
    expect(Object.keys(vocab).sort()).toEqual(
      ["<pad>", "<unk>", "a", "b", "c"].sort(),
    );
  });
});

describe("encode", () => {
  const vocab = buildVocab(["i'm 21 years old today"]);

  it("left-pads short texts to the fixed length", () => {
    const row = encode("i'm 21", vocab, 6);
    expect(row).toHaveLength(6);
    expect(row.slice(0, 4)).toEqual([0, 0, 0, 0]);
    expect(row[4]).toBe(vocab["i'm"]);
    expect(row[5]).toBe(vocab["21"]);
  });

  it("keeps the tail when the text overflows", () => {
    const row = encode("i'm 21 years old today", vocab, 3);
    expect(row).toEqual([vocab["years"], vocab["old"], vocab["today"]]);
  });

  it("maps out-of-vocabulary tokens to the unknown id", () => {
    const row = encode("zzz 21", vocab, 2);
    expect(row).toEqual([1, vocab["21"]]);
  });

  it("sentinels survive normalization into the vocabulary", () => {
    const sentinelVocab = buildVocab(["see http://a.example.com/x @friend"]);
    expect(sentinelVocab["<url>"]).toBeGreaterThan(1);
    expect(sentinelVocab["<user>"]).toBeGreaterThan(1);
    const row = encode("ping @other http://b.example.net/y", sentinelVocab, 4);
    expect(row[2]).toBe(sentinelVocab["<user>"]);
    expect(row[3]).toBe(sentinelVocab["<url>"]);
  });
});

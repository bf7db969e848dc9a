import { normalizeForContextualClassifier, tokenize } from "./normalize.js";

export const PAD_TOKEN = "<pad>";
export const UNK_TOKEN = "<unk>";

export interface Vocab {
  [token: string]: number;
}

/** Index 0 is padding and index 1 is the unknown token, always. */
export function buildVocab(texts: string[]): Vocab {
  const vocab: Vocab = { [PAD_TOKEN]: 0, [UNK_TOKEN]: 1 };
  for (const text of texts) {
    for (const token of tokenize(normalizeForContextualClassifier(text))) {
      if (!(token in vocab)) {
        vocab[token] = Object.keys(vocab).length;
      }
    }
  }
  return vocab;
}

/** Encode to a fixed-length id sequence, left-padded so the recurrent
 * layers end on real content. Over-long texts keep their tail. */
export function encode(text: string, vocab: Vocab, maxLen: number): number[] {
  const tokens = tokenize(normalizeForContextualClassifier(text));
  const ids = tokens.map((token) => vocab[token] ?? vocab[UNK_TOKEN]);
  const tail = ids.slice(Math.max(0, ids.length - maxLen));
  const padding = new Array<number>(maxLen - tail.length).fill(0);
  return padding.concat(tail);
}

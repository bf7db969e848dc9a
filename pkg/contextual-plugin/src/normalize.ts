// Mirror of the host pipeline's contextual normalization: URLs and user
// mentions become sentinels, text is lowercased, punctuation and digits
// are kept. The replacement loop reruns until stable because removing one
// entity can splice the neighbours into a fresh one.

const TRAIL = String.raw`(?=$|\s|[.,!?;:)"']+(?:\s|$))`;
const URL_SOURCE =
  String.raw`(?:https?://\S+?${TRAIL}` +
  String.raw`|www\.\S+?${TRAIL}` +
  String.raw`|\b(?:[A-Za-z0-9-]+\.)+` +
  String.raw`(?:com|net|org|edu|gov|io|co|ly|me|tv|be|gg|info|biz)` +
  String.raw`(?:/\S*?)?${TRAIL})`;
const MENTION_SOURCE = String.raw`@\w+`;

const MAX_ROUNDS = 100;

export function normalizeForContextualClassifier(text: string): string {
  let out = text;
  for (let round = 0; round < MAX_ROUNDS; round++) {
    const step = out
      .replace(new RegExp(URL_SOURCE, "gi"), "<url>")
      .replace(new RegExp(MENTION_SOURCE, "g"), "<user>");
    if (step === out) {
      break;
    }
    out = step;
  }
  return out.toLowerCase();
}

const TOKEN_RE = /<url>|<user>|[a-z0-9']+/g;

/** Split normalized text into model tokens; bare punctuation is dropped. */
export function tokenize(normalized: string): string[] {
  return normalized.match(TOKEN_RE) ?? [];
}

// Build the bundled base checkpoint: generate a synthetic corpus of
// first-person age statements and numeric look-alikes, train the small
// bidirectional model from scratch, and save it under models/.
//
// The shipped checkpoint was produced by:
//   npm run pretrain

import path from "node:path";

import * as tf from "@tensorflow/tfjs";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import {
  Architecture,
  buildModel,
  predictAgeProbs,
  resolveModelDir,
  saveBundle,
} from "../src/model.js";
import { LABELS, PROTOCOL_NAME } from "../src/protocol.js";
import { buildVocab, encode } from "../src/tokenizer.js";
import { LabeledExample, mulberry32, shuffled } from "../src/train.js";

function ordinal(n: number): string {
  const tens = n % 100;
  if (tens >= 11 && tens <= 13) return `${n}th`;
  const suffix = { 1: "st", 2: "nd", 3: "rd" }[n % 10] ?? "th";
  return `${n}${suffix}`;
}

const AGE_TEMPLATES: ((age: number) => string)[] = [
  (age) => `i'm ${age} years old`,
  (age) => `I am ${age} years old today`,
  (age) => `it's my ${ordinal(age)} birthday!!`,
  (age) => `happy birthday to me, ${age} now`,
  (age) => `turning ${age} tomorrow and not ready`,
  (age) => `I turned ${age} yesterday`,
  (age) => `my ${ordinal(age)} birthday is today`,
  (age) => `finally ${age} years old`,
  (age) => `just turned ${age} last week`,
  (age) => `${age} years old and loving life`,
  (age) => `@bestie i'm ${age} years old now`,
  (age) => `celebrating my ${ordinal(age)} birthday https://pics.example.com/cake`,
  (age) => `birthday dinner for me, officially ${age}`,
  (age) => `can't believe i'm already ${age} years old`,
];

const NO_AGE_TEMPLATES: ((n: number) => string)[] = [
  (n) => `ate ${n} chicken nuggets for lunch`,
  (n) => `scored ${n} points in the game last night`,
  (n) => `my bus was ${n} minutes late again`,
  (n) => `bought ${n} new plants for the garden`,
  (n) => `drove ${n} miles to see the show`,
  (n) => `my sister is ${n} years old`,
  (n) => `that movie was ${n} minutes too long`,
  (n) => `lifted ${n} pounds at the gym today`,
  (n) => `won ${n} dollars on a scratch card`,
  (n) => `read ${n} pages before bed`,
  (n) => `@coach we need ${n} more cones for practice`,
  (n) => `the recipe calls for ${n} grams of butter www.example.com/soup`,
  (n) => `grandpa turned ${n} and we threw a party for him`,
  (n) => `my dog is ${n} in human years`,
];

function makeCorpus(count: number, seed: number): LabeledExample[] {
  const rand = mulberry32(seed);
  const out: LabeledExample[] = [];
  for (let i = 0; i < count; i++) {
    const n = 10 + Math.floor(rand() * 80);
    if (i % 2 === 0) {
      const template = AGE_TEMPLATES[Math.floor(rand() * AGE_TEMPLATES.length)];
      out.push({ text: template(n), label: "age" });
    } else {
      const template =
        NO_AGE_TEMPLATES[Math.floor(rand() * NO_AGE_TEMPLATES.length)];
      out.push({ text: template(n), label: "no_age" });
    }
  }
  return shuffled(out, rand);
}

async function main() {
  const argv = await yargs(hideBin(process.argv))
    .option("out", { type: "string", default: "age-bilstm-mini" })
    .option("examples", { type: "number", default: 1000 })
    .option("epochs", { type: "number", default: 30 })
    .option("learning-rate", { type: "number", default: 0.005 })
    .option("batch-size", { type: "number", default: 16 })
    .option("max-len", { type: "number", default: 32 })
    .option("embedding-dim", { type: "number", default: 16 })
    .option("lstm-units", { type: "number", default: 8 })
    .option("dropout", { type: "number", default: 0.5 })
    .option("seed", { type: "number", default: 7 })
    .strict()
    .parse();

  const corpus = makeCorpus(argv.examples, argv.seed);
  const devCount = Math.max(1, Math.floor(corpus.length * 0.1));
  const dev = corpus.slice(0, devCount);
  const train = corpus.slice(devCount);
  const vocab = buildVocab(corpus.map((example) => example.text));
  console.log(`corpus ${corpus.length} examples, vocab ${Object.keys(vocab).length}`);

  const architecture: Architecture = {
    embeddingDim: argv["embedding-dim"],
    lstmUnits: argv["lstm-units"],
  };
  const model = buildModel(
    Object.keys(vocab).length,
    argv["max-len"],
    architecture,
    argv.dropout,
    argv.seed,
  );
  model.compile({
    optimizer: tf.train.adam(argv["learning-rate"]),
    loss: "categoricalCrossentropy",
  });

  const toRows = (rows: LabeledExample[]) =>
    rows.map((example) => encode(example.text, vocab, argv["max-len"]));
  const xs = tf.tensor2d(toRows(train));
  const ys = tf.tensor2d(
    train.map((example) => (example.label === "age" ? [0, 1] : [1, 0])),
  );
  const accuracy = (rows: LabeledExample[]) => {
    const probs = predictAgeProbs(model, toRows(rows));
    const hits = rows.filter(
      (example, i) => (probs[i] > 0.5) === (example.label === "age"),
    ).length;
    return hits / rows.length;
  };

  for (let epoch = 1; epoch <= argv.epochs; epoch++) {
    const history = await model.fit(xs, ys, {
      epochs: 1,
      batchSize: argv["batch-size"],
      shuffle: false,
      verbose: 0,
    });
    const loss = Number(history.history["loss"][0]);
    console.log(
      `epoch ${epoch}: loss ${loss.toFixed(4)} dev accuracy ${accuracy(dev).toFixed(3)}`,
    );
  }
  const trainAccuracy = accuracy(train);
  const devAccuracy = accuracy(dev);
  console.log(
    `final train accuracy ${trainAccuracy.toFixed(3)}, dev accuracy ${devAccuracy.toFixed(3)}`,
  );

  const outDir = path.isAbsolute(argv.out)
    ? argv.out
    : resolveModelDir(argv.out);
  await saveBundle(outDir, {
    model,
    vocab,
    meta: {
      protocol: PROTOCOL_NAME,
      labels: LABELS,
      maxLen: argv["max-len"],
      architecture,
      training: {
        pretraining: true,
        examples: argv.examples,
        epochs: argv.epochs,
        learningRate: argv["learning-rate"],
        batchSize: argv["batch-size"],
        dropout: argv.dropout,
        seed: argv.seed,
        trainAccuracy,
        devAccuracy,
      },
    },
  });
  console.log(`saved base checkpoint to ${outDir}`);
  xs.dispose();
  ys.dispose();
}

main().catch((cause) => {
  console.error(cause instanceof Error ? cause.message : String(cause));
  process.exit(1);
});

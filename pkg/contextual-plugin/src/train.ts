import fs from "node:fs";

import * as tf from "@tensorflow/tfjs";

import { Hyperparameters } from "./config.js";
import {
  ModelBundle,
  buildModel,
  loadBundle,
  predictAgeProbs,
  resolveModelDir,
  saveBundle,
} from "./model.js";
import { LABELS, PROTOCOL_NAME, WireLabel } from "./protocol.js";
import { encode } from "./tokenizer.js";

/** Raised for bad training data before any training work starts. */
export class SchemaError extends Error {}

export interface LabeledExample {
  text: string;
  label: WireLabel;
}

export function loadLabeledJsonl(file: string): LabeledExample[] {
  let content: string;
  try {
    content = fs.readFileSync(file, "utf-8");
  } catch (cause) {
    throw new SchemaError(`cannot read ${file}: ${(cause as Error).message}`);
  }
  const examples: LabeledExample[] = [];
  const lines = content.split("\n");
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i].trim();
    if (!line) {
      continue;
    }
    let record: unknown;
    try {
      record = JSON.parse(line);
    } catch {
      throw new SchemaError(`${file}:${i + 1}: not valid json`);
    }
    if (typeof record !== "object" || record === null || Array.isArray(record)) {
      throw new SchemaError(`${file}:${i + 1}: not a json object`);
    }
    const { text, label } = record as Record<string, unknown>;
    if (typeof text !== "string" || text.length === 0) {
      throw new SchemaError(`${file}:${i + 1}: missing text field`);
    }
    if (label !== "age" && label !== "no_age") {
      throw new SchemaError(
        `${file}:${i + 1}: label must be "age" or "no_age", got ${JSON.stringify(label)}`,
      );
    }
    examples.push({ text, label });
  }
  if (examples.length === 0) {
    throw new SchemaError(`${file}: no examples`);
  }
  return examples;
}

/** Deterministic 32-bit PRNG so shuffles replay across runs. */
export function mulberry32(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function shuffled<T>(items: readonly T[], rand: () => number): T[] {
  const out = items.slice();
  for (let i = out.length - 1; i > 0; i--) {
    const j = Math.floor(rand() * (i + 1));
    [out[i], out[j]] = [out[j], out[i]];
  }
  return out;
}

export interface EpochMetrics {
  epoch: number;
  loss: number;
  devAccuracy: number;
  devF1: number;
}

export interface FinetuneResult {
  outDir: string;
  bestEpoch: number;
  devAccuracy: number;
  devF1: number;
  trajectory: EpochMetrics[];
}

/** F1 for the age class; empty denominators count as zero. */
function ageF1(predicted: boolean[], gold: boolean[]): number {
  let tp = 0;
  let fp = 0;
  let fn = 0;
  for (let i = 0; i < gold.length; i++) {
    if (predicted[i] && gold[i]) tp++;
    else if (predicted[i] && !gold[i]) fp++;
    else if (!predicted[i] && gold[i]) fn++;
  }
  const precision = tp + fp === 0 ? 0 : tp / (tp + fp);
  const recall = tp + fn === 0 ? 0 : tp / (tp + fn);
  const sum = precision + recall;
  return sum === 0 ? 0 : (2 * precision * recall) / sum;
}

export async function finetune(
  trainFile: string,
  outDir: string,
  config: Hyperparameters,
  log: (line: string) => void = () => {},
): Promise<FinetuneResult> {
  const examples = loadLabeledJsonl(trainFile);
  const base = await loadBundle(resolveModelDir(config.baseModel));
  if (config.maxLen !== base.meta.maxLen) {
    throw new SchemaError(
      `--max-len ${config.maxLen} does not match the base model (${base.meta.maxLen})`,
    );
  }

  const devCount = Math.max(
    1,
    Math.floor(examples.length * config.devSplit + 1e-9),
  );
  if (devCount >= examples.length) {
    throw new SchemaError(
      `dev split of ${devCount} leaves no training data for ${examples.length} examples`,
    );
  }
  const order = shuffled(examples, mulberry32(config.seed));
  const dev = order.slice(0, devCount);
  const train = order.slice(devCount);

  const vocab = base.vocab;
  const encodeAll = (rows: LabeledExample[]) =>
    rows.map((example) => encode(example.text, vocab, base.meta.maxLen));
  const trainRows = encodeAll(train);
  const devRows = encodeAll(dev);
  const devGold = dev.map((example) => example.label === "age");

  // Rebuild the graph so the dropout rate and seed come from this run's
  // config, then start from the base checkpoint's weights.
  const model = buildModel(
    Object.keys(vocab).length,
    base.meta.maxLen,
    base.meta.architecture,
    config.dropout,
    config.seed,
  );
  model.setWeights(base.model.getWeights());
  base.model.dispose();
  model.compile({
    optimizer: tf.train.adam(config.learningRate),
    loss: "categoricalCrossentropy",
  });

  const xs = tf.tensor2d(trainRows);
  const ys = tf.tensor2d(
    train.map((example) =>
      example.label === "age" ? [0, 1] : [1, 0],
    ),
  );
  let best: { metrics: EpochMetrics; weights: tf.Tensor[] } | null = null;
  const trajectory: EpochMetrics[] = [];
  try {
    for (let epoch = 1; epoch <= config.epochs; epoch++) {
      const history = await model.fit(xs, ys, {
        epochs: 1,
        batchSize: config.batchSize,
        shuffle: false,
        verbose: 0,
      });
      const loss = Number(history.history["loss"][0]);
      const probs = predictAgeProbs(model, devRows);
      const predicted = Array.from(probs, (p) => p > 0.5);
      const agree = predicted.filter((p, i) => p === devGold[i]).length;
      const metrics: EpochMetrics = {
        epoch,
        loss,
        devAccuracy: agree / devGold.length,
        devF1: ageF1(predicted, devGold),
      };
      trajectory.push(metrics);
      log(
        `epoch ${epoch}: loss ${loss.toFixed(4)}` +
          ` dev accuracy ${metrics.devAccuracy.toFixed(3)}` +
          ` dev f1 ${metrics.devF1.toFixed(3)}`,
      );
      if (!best || metrics.devF1 > best.metrics.devF1) {
        if (best) {
          best.weights.forEach((w) => w.dispose());
        }
        best = {
          metrics,
          weights: model.getWeights().map((w) => w.clone()),
        };
      }
    }
    if (!best) {
      throw new SchemaError("epochs must be at least 1");
    }
    model.setWeights(best.weights);
    best.weights.forEach((w) => w.dispose());
  } finally {
    xs.dispose();
    ys.dispose();
  }

  const bundle: ModelBundle = {
    model,
    vocab,
    meta: {
      protocol: PROTOCOL_NAME,
      labels: LABELS,
      maxLen: base.meta.maxLen,
      architecture: base.meta.architecture,
      baseModel: config.baseModel,
      training: {
        epochs: config.epochs,
        learningRate: config.learningRate,
        dropout: config.dropout,
        devSplit: config.devSplit,
        seed: config.seed,
        batchSize: config.batchSize,
        trainExamples: train.length,
        devExamples: dev.length,
        bestEpoch: best.metrics.epoch,
        devAccuracy: best.metrics.devAccuracy,
        devF1: best.metrics.devF1,
        trajectory,
      },
    },
  };
  await saveBundle(outDir, bundle);
  return {
    outDir,
    bestEpoch: best.metrics.epoch,
    devAccuracy: best.metrics.devAccuracy,
    devF1: best.metrics.devF1,
    trajectory,
  };
}

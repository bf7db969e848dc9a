import fs from "node:fs";
import path from "node:path";
import { fileURLToPath } from "node:url";

import * as tf from "@tensorflow/tfjs";

import { LABELS, WireLabel } from "./protocol.js";
import { Vocab, encode } from "./tokenizer.js";

export interface Architecture {
  embeddingDim: number;
  lstmUnits: number;
}

export interface BundleMeta {
  protocol: string;
  labels: readonly string[];
  maxLen: number;
  architecture: Architecture;
  baseModel?: string;
  training?: Record<string, unknown>;
}

export interface ModelBundle {
  model: tf.LayersModel;
  vocab: Vocab;
  meta: BundleMeta;
}

export function buildModel(
  vocabSize: number,
  maxLen: number,
  architecture: Architecture,
  dropout: number,
  seed: number,
): tf.LayersModel {
  const model = tf.sequential();
  model.add(
    tf.layers.embedding({
      inputDim: vocabSize,
      outputDim: architecture.embeddingDim,
      inputLength: maxLen,
      embeddingsInitializer: tf.initializers.randomUniform({
        minval: -0.05,
        maxval: 0.05,
        seed,
      }),
    }),
  );
  model.add(
    tf.layers.bidirectional({
      layer: tf.layers.lstm({
        units: architecture.lstmUnits,
        kernelInitializer: tf.initializers.glorotUniform({ seed: seed + 1 }),
        recurrentInitializer: tf.initializers.glorotUniform({ seed: seed + 2 }),
      }),
      mergeMode: "concat",
    }),
  );
  model.add(tf.layers.dropout({ rate: dropout, seed: seed + 3 }));
  model.add(
    tf.layers.dense({
      units: LABELS.length,
      activation: "softmax",
      kernelInitializer: tf.initializers.glorotUniform({ seed: seed + 4 }),
    }),
  );
  return model;
}

/** Probability of the "age" class for each encoded row. */
export function predictAgeProbs(
  model: tf.LayersModel,
  rows: number[][],
): Float32Array {
  return tf.tidy(() => {
    const input = tf.tensor2d(rows, [rows.length, rows[0].length]);
    const output = model.predict(input) as tf.Tensor;
    const probs = output.dataSync() as Float32Array;
    const ageIndex = LABELS.indexOf("age");
    const out = new Float32Array(rows.length);
    for (let i = 0; i < rows.length; i++) {
      out[i] = probs[i * LABELS.length + ageIndex];
    }
    return out;
  });
}

export interface Scored {
  label: WireLabel;
  score: number;
}

/** Signed score in [-1, 1]; positive means the age class. */
export function classifyText(bundle: ModelBundle, text: string): Scored {
  const row = encode(text, bundle.vocab, bundle.meta.maxLen);
  const pAge = predictAgeProbs(bundle.model, [row])[0];
  const score = 2 * pAge - 1;
  return { label: score > 0 ? "age" : "no_age", score };
}

export async function saveBundle(
  dir: string,
  bundle: ModelBundle,
): Promise<void> {
  fs.mkdirSync(dir, { recursive: true });
  let captured: tf.io.ModelArtifacts | null = null;
  await bundle.model.save(
    tf.io.withSaveHandler(async (artifacts) => {
      captured = artifacts;
      return {
        modelArtifactsInfo: {
          dateSaved: new Date(),
          modelTopologyType: "JSON",
        },
      };
    }),
  );
  const artifacts = captured as tf.io.ModelArtifacts | null;
  if (!artifacts || !artifacts.weightData) {
    throw new Error("model serialization produced no weights");
  }
  const joined = tf.io.CompositeArrayBuffer.join(artifacts.weightData);
  const payload = {
    modelTopology: artifacts.modelTopology,
    weightSpecs: artifacts.weightSpecs,
    weightDataBase64: Buffer.from(new Uint8Array(joined)).toString("base64"),
  };
  fs.writeFileSync(path.join(dir, "model.json"), JSON.stringify(payload));
  fs.writeFileSync(path.join(dir, "vocab.json"), JSON.stringify(bundle.vocab));
  fs.writeFileSync(
    path.join(dir, "config.json"),
    JSON.stringify(bundle.meta, null, 2) + "\n",
  );
}

export async function loadBundle(dir: string): Promise<ModelBundle> {
  const modelPath = path.join(dir, "model.json");
  if (!fs.existsSync(modelPath)) {
    throw new Error(`no model.json under ${dir}`);
  }
  const payload = JSON.parse(fs.readFileSync(modelPath, "utf-8"));
  const raw = Buffer.from(payload.weightDataBase64, "base64");
  const weightData = raw.buffer.slice(
    raw.byteOffset,
    raw.byteOffset + raw.byteLength,
  );
  const model = await tf.loadLayersModel(
    tf.io.fromMemory({
      modelTopology: payload.modelTopology,
      weightSpecs: payload.weightSpecs,
      weightData,
    }),
  );
  const vocab = JSON.parse(
    fs.readFileSync(path.join(dir, "vocab.json"), "utf-8"),
  ) as Vocab;
  const meta = JSON.parse(
    fs.readFileSync(path.join(dir, "config.json"), "utf-8"),
  ) as BundleMeta;
  return { model, vocab, meta };
}

function packageRoot(): string {
  let dir = path.dirname(fileURLToPath(import.meta.url));
  while (!fs.existsSync(path.join(dir, "package.json"))) {
    const parent = path.dirname(dir);
    if (parent === dir) {
      throw new Error("package root not found");
    }
    dir = parent;
  }
  return dir;
}

/** A base model is either a directory path or the name of a checkpoint
 * shipped under models/ in this package. */
export function resolveModelDir(nameOrPath: string): string {
  if (fs.existsSync(path.join(nameOrPath, "model.json"))) {
    return nameOrPath;
  }
  return path.join(packageRoot(), "models", nameOrPath);
}

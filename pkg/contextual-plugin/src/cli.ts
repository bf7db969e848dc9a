#!/usr/bin/env node
import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { DEFAULTS } from "./config.js";

// The protocol owns stdout, and the tensor library greets Node users via
// console.log. Reroute console output to stderr before it ever loads;
// that is why the tensor-backed modules are imported lazily below.
function sendConsoleToStderr(): void {
  const toStderr =
    (write: (line: string) => void) =>
    (...args: unknown[]) =>
      write(args.map(String).join(" ") + "\n");
  console.log = toStderr((line) => process.stderr.write(line));
  console.info = console.log;
  console.warn = console.log;
}

await yargs(hideBin(process.argv))
  .scriptName("contextual-plugin")
  .command(
    "serve",
    "serve a fine-tuned model over the age-clf/1 stdio protocol",
    (args) =>
      args.option("model", {
        type: "string",
        demandOption: true,
        describe: "model directory, or the name of a bundled checkpoint",
      }),
    async (argv) => {
      sendConsoleToStderr();
      try {
        const { serve } = await import("./serve.js");
        await serve(argv.model);
      } catch (cause) {
        process.stderr.write(`error: ${(cause as Error).message}\n`);
        process.exit(1);
      }
    },
  )
  .command(
    "finetune",
    "fine-tune the base checkpoint on a labeled jsonl file",
    (args) =>
      args
        .option("train", {
          type: "string",
          demandOption: true,
          describe: "jsonl file of {text, label} records",
        })
        .option("out", {
          type: "string",
          demandOption: true,
          describe: "directory to write the fine-tuned model to",
        })
        .option("base-model", { type: "string", default: DEFAULTS.baseModel })
        .option("epochs", { type: "number", default: DEFAULTS.epochs })
        .option("learning-rate", {
          type: "number",
          default: DEFAULTS.learningRate,
        })
        .option("dropout", { type: "number", default: DEFAULTS.dropout })
        .option("dev-split", { type: "number", default: DEFAULTS.devSplit })
        .option("seed", { type: "number", default: DEFAULTS.seed })
        .option("batch-size", { type: "number", default: DEFAULTS.batchSize })
        .option("max-len", { type: "number", default: DEFAULTS.maxLen }),
    async (argv) => {
      sendConsoleToStderr();
      try {
        const { finetune } = await import("./train.js");
        const result = await finetune(
          argv.train,
          argv.out,
          {
            baseModel: argv["base-model"],
            epochs: argv.epochs,
            learningRate: argv["learning-rate"],
            dropout: argv.dropout,
            devSplit: argv["dev-split"],
            seed: argv.seed,
            batchSize: argv["batch-size"],
            maxLen: argv["max-len"],
          },
          (line) => process.stderr.write(line + "\n"),
        );
        process.stdout.write(
          `saved model to ${result.outDir} (best epoch ${result.bestEpoch},` +
            ` dev accuracy ${result.devAccuracy.toFixed(3)},` +
            ` dev f1 ${result.devF1.toFixed(3)})\n`,
        );
      } catch (cause) {
        process.stderr.write(`error: ${(cause as Error).message}\n`);
        process.exit(1);
      }
    },
  )
  .demandCommand(1, "a command is required")
  .strict()
  .help()
  .parse();

export interface Hyperparameters {
  baseModel: string;
  dropout: number;
  epochs: number;
  learningRate: number;
  devSplit: number;
  seed: number;
  batchSize: number;
  maxLen: number;
}

// dropout, epochs, learning rate and dev split follow the published
// training setup; batch size and sequence length have no published value,
// so the defaults here are documented in the README and exposed as flags.
export const DEFAULTS: Hyperparameters = {
  baseModel: "age-bilstm-mini",
  dropout: 0.5,
  epochs: 10,
  learningRate: 0.0001,
  devSplit: 0.05,
  seed: 1,
  batchSize: 8,
  maxLen: 32,
};

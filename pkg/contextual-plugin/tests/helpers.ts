import { ChildProcessWithoutNullStreams, spawn } from "node:child_process";
import path from "node:path";
import readline from "node:readline";
import { fileURLToPath } from "node:url";

const HERE = path.dirname(fileURLToPath(import.meta.url));
export const CLI = path.join(HERE, "..", "dist", "src", "cli.js");
export const BASE_MODEL = path.join(HERE, "..", "models", "age-bilstm-mini");

/** Drives one served plug-in process line by line. */
export class ServedPlugin {
  private child: ChildProcessWithoutNullStreams;
  private pending: ((line: string) => void)[] = [];
  private buffered: string[] = [];
  readonly exited: Promise<number | null>;

  constructor(modelDir: string) {
    this.child = spawn("node", [CLI, "serve", "--model", modelDir], {
      stdio: ["pipe", "pipe", "pipe"],
    });
    const rl = readline.createInterface({ input: this.child.stdout });
    rl.on("line", (line) => {
      const waiter = this.pending.shift();
      if (waiter) {
        waiter(line);
      } else {
        this.buffered.push(line);
      }
    });
    this.exited = new Promise((resolve) => {
      this.child.on("exit", (code) => resolve(code));
    });
  }

  sendLine(line: string): void {
    this.child.stdin.write(line + "\n");
  }

  send(message: unknown): void {
    this.sendLine(JSON.stringify(message));
  }

  readLine(timeoutMs = 60_000): Promise<string> {
    const queued = this.buffered.shift();
    if (queued !== undefined) {
      return Promise.resolve(queued);
    }
    return new Promise((resolve, reject) => {
      const timer = setTimeout(
        () => reject(new Error("timed out waiting for a response line")),
        timeoutMs,
      );
      this.pending.push((line) => {
        clearTimeout(timer);
        resolve(line);
      });
    });
  }

  async read(timeoutMs = 60_000): Promise<Record<string, unknown>> {
    return JSON.parse(await this.readLine(timeoutMs));
  }

  async handshake(): Promise<Record<string, unknown>> {
    this.send({ protocol: "age-clf/1" });
    return this.read();
  }

  close(): void {
    this.child.stdin.end();
  }

  kill(): void {
    this.child.kill();
  }
}

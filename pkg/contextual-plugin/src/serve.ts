import readline from "node:readline";
import { stdin, stdout } from "node:process";

import { classifyText, loadBundle, resolveModelDir } from "./model.js";
import {
  PLUGIN_NAME,
  PROTOCOL_NAME,
  checkRequest,
  isHandshake,
  parseObjectLine,
  serialize,
} from "./protocol.js";

function clip(line: string): string {
  return line.length > 80 ? line.slice(0, 77) + "..." : line;
}

/** Speak age-clf/1 over stdio: one handshake line, then one response per
 * request line. Malformed lines get an error response and the process
 * keeps serving; requests are handled one at a time. */
export async function serve(modelDir: string): Promise<void> {
  const bundle = await loadBundle(resolveModelDir(modelDir));
  const rl = readline.createInterface({
    input: stdin,
    crlfDelay: Number.POSITIVE_INFINITY,
    terminal: false,
  });
  let handshaken = false;
  for await (const line of rl) {
    const message = parseObjectLine(line);
    if (!handshaken) {
      if (message !== null && isHandshake(message)) {
        handshaken = true;
        stdout.write(serialize({ ok: true, name: PLUGIN_NAME }));
        continue;
      }
      // The open stdin pipe would keep the process alive, so exit once
      // the rejection line has flushed.
      stdout.write(
        serialize({
          ok: false,
          error: `expected an ${PROTOCOL_NAME} handshake, got: ${clip(line)}`,
        }),
        () => process.exit(1),
      );
      return;
    }
    if (message === null) {
      stdout.write(serialize({ error: `not a json object: ${clip(line)}` }));
      continue;
    }
    const request = checkRequest(message);
    if ("error" in request) {
      stdout.write(serialize(request));
      continue;
    }
    const { label, score } = classifyText(bundle, request.text);
    stdout.write(serialize({ id: request.id, label, score }));
  }
}

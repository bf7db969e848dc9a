import { afterEach, describe, expect, it } from "vitest";

import { checkRequest, parseObjectLine } from "../src/protocol.js";
import { BASE_MODEL, ServedPlugin } from "./helpers.js";

describe("parseObjectLine", () => {
  it("accepts json objects and rejects everything else", () => {
    expect(parseObjectLine('{"a": 1}')).toEqual({ a: 1 });
    expect(parseObjectLine("not json")).toBeNull();
    expect(parseObjectLine("[1, 2]")).toBeNull();
    expect(parseObjectLine('"string"')).toBeNull();
    expect(parseObjectLine("")).toBeNull();
  });
});

describe("checkRequest", () => {
  it("requires a string id and a string text", () => {
    expect(checkRequest({ id: "a", text: "hi" })).toEqual({
      id: "a",
      text: "hi",
    });
    expect(checkRequest({ text: "hi" })).toHaveProperty("error");
    expect(checkRequest({ id: 3, text: "hi" })).toHaveProperty("error");
    expect(checkRequest({ id: "a" })).toHaveProperty("error");
    expect(checkRequest({ id: "a", text: 5 })).toHaveProperty("error");
  });
});

describe("served plug-in", () => {
  let plugin: ServedPlugin | null = null;

  afterEach(() => {
    plugin?.kill();
    plugin = null;
  });

  it("answers the handshake with its name", async () => {
    plugin = new ServedPlugin(BASE_MODEL);
    const reply = await plugin.handshake();
    expect(reply).toEqual({ ok: true, name: "contextual-plugin" });
  });

  it("rejects a wrong handshake and exits nonzero", async () => {
    plugin = new ServedPlugin(BASE_MODEL);
    plugin.send({ protocol: "other/9" });
    const reply = await plugin.read();
    expect(reply.ok).toBe(false);
    expect(await plugin.exited).toBe(1);
    plugin = null;
  });

  it("correlates ids across 100 messages", async () => {
    plugin = new ServedPlugin(BASE_MODEL);
    await plugin.handshake();
    const ids: string[] = [];
    for (let i = 0; i < 100; i++) {
      const id = `msg-${i}`;
      ids.push(id);
      const text =
        i % 2 === 0
          ? `i'm ${14 + (i % 50)} years old today`
          : `scored ${14 + (i % 50)} points in the game`;
      plugin.send({ id, text });
    }
    const seen: string[] = [];
    for (let i = 0; i < 100; i++) {
      const response = await plugin.read();
      expect(typeof response.id).toBe("string");
      seen.push(response.id as string);
      expect(["age", "no_age"]).toContain(response.label);
      const score = response.score as number;
      expect(typeof score).toBe("number");
      expect(score).toBeGreaterThanOrEqual(-1);
      expect(score).toBeLessThanOrEqual(1);
      const index = Number((response.id as string).split("-")[1]);
      expect(response.label).toBe(index % 2 === 0 ? "age" : "no_age");
    }
    expect(seen.sort()).toEqual(ids.sort());
  });

  it("answers garbage with an error and keeps serving", async () => {
    plugin = new ServedPlugin(BASE_MODEL);
    await plugin.handshake();
    plugin.sendLine("this is not json");
    const error = await plugin.read();
    expect(error).toHaveProperty("error");
    plugin.send({ id: "after", text: "happy birthday to me, 30 now" });
    const response = await plugin.read();
    expect(response.id).toBe("after");
    expect(response.label).toBe("age");
  });

  it("answers malformed requests with an error and keeps serving", async () => {
    plugin = new ServedPlugin(BASE_MODEL);
    await plugin.handshake();
    plugin.send({ id: "missing-text" });
    expect(await plugin.read()).toHaveProperty("error");
    plugin.send({ text: "no id here" });
    expect(await plugin.read()).toHaveProperty("error");
    plugin.send({ id: "ok", text: "ate 21 chicken nuggets for lunch" });
    const response = await plugin.read();
    expect(response.id).toBe("ok");
    expect(response.label).toBe("no_age");
  });

  it("exits cleanly when stdin closes", async () => {
    plugin = new ServedPlugin(BASE_MODEL);
    await plugin.handshake();
    plugin.close();
    expect(await plugin.exited).toBe(0);
    plugin = null;
  });
});

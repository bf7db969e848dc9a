export const PROTOCOL_NAME = "age-clf/1";
export const PLUGIN_NAME = "contextual-plugin";

export const LABELS = ["no_age", "age"] as const;
export type WireLabel = (typeof LABELS)[number];

export interface Handshake {
  protocol: string;
}

export interface HandshakeReply {
  ok: boolean;
  name?: string;
  error?: string;
}

export interface ClassifyRequest {
  id: string;
  text: string;
}

export interface ClassifyResponse {
  id: string;
  label: WireLabel;
  score: number;
}

export interface ErrorResponse {
  error: string;
}

export function serialize(message: unknown): string {
  return JSON.stringify(message) + "\n";
}

/** Parse one wire line; null means the line was not a JSON object. */
export function parseObjectLine(line: string): Record<string, unknown> | null {
  let value: unknown;
  try {
    value = JSON.parse(line);
  } catch {
    return null;
  }
  if (typeof value !== "object" || value === null || Array.isArray(value)) {
    return null;
  }
  return value as Record<string, unknown>;
}

export function isHandshake(message: Record<string, unknown>): boolean {
  return message["protocol"] === PROTOCOL_NAME;
}

/** Validate a classify request, returning an error string when invalid. */
export function checkRequest(
  message: Record<string, unknown>,
): { id: string; text: string } | { error: string } {
  const id = message["id"];
  if (typeof id !== "string" || id.length === 0) {
    return { error: "request is missing a string id" };
  }
  const text = message["text"];
  if (typeof text !== "string") {
    return { error: `request ${id} is missing a string text field` };
  }
  return { id, text };
}

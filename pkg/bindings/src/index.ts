/**
 * Node bindings for the dicelang roller.
 *
 * The core ships as a Python package with a JSON command-line protocol; these
 * bindings speak that protocol so JavaScript callers never parse dice
 * notation themselves.  One-shot rolls spawn `dicelang roll --format json`;
 * a {@link Session} keeps a `dicelang repl --format json` child alive and
 * streams one JSON document per expression, which is much cheaper when
 * rolling in bulk.
 */

import { spawn, spawnSync, ChildProcessWithoutNullStreams } from "node:child_process";
import { mkdtempSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

/** Result of a single die within a roll, as reported by the core. */
export interface DieRecord {
  /** Every face shown by this die, in roll order (rerolls, explosions...). */
  history: Array<number | string>;
  status: "kept" | "dropped" | "filtered_out";
  limit_hit?: boolean;
}

/** Successful evaluation of one expression. */
export interface RollResult {
  groups: Array<number | string>;
  records: DieRecord[];
  warnings: string[];
}

/** Structured rejection: bad syntax, bad semantics, or a resource limit. */
export interface RollFailure {
  error: {
    code: string;
    message: string;
    span: [number, number] | null;
  };
}

export type RollReply = RollResult | RollFailure;

export function isFailure(reply: RollReply): reply is RollFailure {
  return "error" in reply;
}

export interface RollOptions {
  /** Seed for the core's randomness source; omit for a fresh stream. */
  seed?: number;
  /** Macro definitions, name (uppercase) to expression body. */
  macros?: Record<string, string>;
  /** Reroll/explosion chain cap; forwarded as DICE_LIMIT_L. */
  chainLimit?: number;
  /** Dice-pool size cap; forwarded as DICE_MAX_POOL. */
  maxPool?: number;
  /** Override the interpreter used to run the core (default "python3"). */
  python?: string;
}

export class DicelangProcessError extends Error {
  constructor(message: string, public readonly exitCode: number | null) {
    super(message);
    this.name = "DicelangProcessError";
  }
}

function coreEnv(options: RollOptions): NodeJS.ProcessEnv {
  const env: NodeJS.ProcessEnv = { ...process.env };
  if (options.chainLimit !== undefined) {
    env.DICE_LIMIT_L = String(options.chainLimit);
  }
  if (options.maxPool !== undefined) {
    env.DICE_MAX_POOL = String(options.maxPool);
  }
  return env;
}

function writeMacroFile(dir: string, macros: Record<string, string>): string {
  const path = join(dir, "macros.dice");
  const lines = Object.entries(macros).map(
    ([name, body]) => `#${name} = ${body}`,
  );
  writeFileSync(path, lines.join("\n") + "\n", "utf8");
  return path;
}

function parseReply(line: string): RollReply {
  return JSON.parse(line) as RollReply;
}

/**
 * Evaluate one expression by spawning the core once.
 *
 * Errors the core reports (syntax, semantics, limits) come back as a
 * {@link RollFailure}; only a missing or crashing interpreter throws.
 */
export function roll(expression: string, options: RollOptions = {}): RollReply {
  const args = ["-m", "dicelang", "roll", "--format", "json"];
  if (options.seed !== undefined) {
    args.push("--seed", String(options.seed));
  }
  let scratch: string | undefined;
  try {
    if (options.macros !== undefined) {
      scratch = mkdtempSync(join(tmpdir(), "dicelang-"));
      args.push("--macros", writeMacroFile(scratch, options.macros));
    }
    args.push("--", expression);
    const proc = spawnSync(options.python ?? "python3", args, {
      env: coreEnv(options),
      encoding: "utf8",
      maxBuffer: 64 * 1024 * 1024,
    });
    if (proc.error) {
      throw new DicelangProcessError(proc.error.message, null);
    }
    const payload = proc.status === 0 ? proc.stdout : proc.stderr;
    const line = payload.split("\n", 1)[0];
    if (!line) {
      throw new DicelangProcessError(
        `core exited with status ${proc.status} and no output`,
        proc.status,
      );
    }
    return parseReply(line);
  } finally {
    if (scratch !== undefined) {
      rmSync(scratch, { recursive: true, force: true });
    }
  }
}

interface PendingReply {
  resolve: (reply: RollReply) => void;
  reject: (err: Error) => void;
}

/**
 * A persistent evaluation session over the core's line-per-request JSON
 * protocol.  Replies arrive strictly in request order, so an internal queue
 * pairs each stdout line with the oldest outstanding promise.
 */
export class Session {
  private child: ChildProcessWithoutNullStreams;
  private pending: PendingReply[] = [];
  private buffered = "";
  private exitError: DicelangProcessError | null = null;
  private exitPromise: Promise<number | null>;

  constructor(options: RollOptions = {}) {
    const args = ["-m", "dicelang", "repl", "--format", "json"];
    if (options.seed !== undefined) {
      args.push("--seed", String(options.seed));
    }
    let scratch: string | undefined;
    if (options.macros !== undefined) {
      scratch = mkdtempSync(join(tmpdir(), "dicelang-"));
      args.push("--macros", writeMacroFile(scratch, options.macros));
    }
    this.child = spawn(options.python ?? "python3", args, {
      env: coreEnv(options),
      stdio: ["pipe", "pipe", "pipe"],
    });
    this.child.stdout.setEncoding("utf8");
    this.child.stdout.on("data", (chunk: string) => this.onData(chunk));
    this.exitPromise = new Promise((resolve) => {
      this.child.on("exit", (code) => {
        if (scratch !== undefined) {
          rmSync(scratch, { recursive: true, force: true });
        }
        if (this.pending.length > 0) {
          this.exitError = new DicelangProcessError(
            `core exited with ${this.pending.length} requests outstanding`,
            code,
          );
          for (const waiter of this.pending.splice(0)) {
            waiter.reject(this.exitError);
          }
        }
        resolve(code);
      });
    });
  }

  private onData(chunk: string): void {
    this.buffered += chunk;
    let newline: number;
    while ((newline = this.buffered.indexOf("\n")) >= 0) {
      const line = this.buffered.slice(0, newline);
      this.buffered = this.buffered.slice(newline + 1);
      const waiter = this.pending.shift();
      if (waiter === undefined) {
        continue; // unsolicited output; nothing to pair it with
      }
      try {
        waiter.resolve(parseReply(line));
      } catch (err) {
        waiter.reject(err as Error);
      }
    }
  }

  /** True once the underlying interpreter has exited. */
  get exited(): boolean {
    return this.child.exitCode !== null;
  }

  /**
   * Evaluate one expression.  With a seed the request is hermetic: it gets
   * a private draw stream and leaves no macro definitions behind.  Without
   * one it continues the session's stream and macro table.
   */
  roll(expression: string, seed?: number): Promise<RollReply> {
    if (this.exited || this.exitError !== null) {
      return Promise.reject(
        this.exitError ??
          new DicelangProcessError("session is closed", this.child.exitCode),
      );
    }
    const request =
      seed === undefined ? expression : { expression, seed };
    return new Promise((resolve, reject) => {
      this.pending.push({ resolve, reject });
      this.child.stdin.write(JSON.stringify(request) + "\n");
    });
  }

  /** Close stdin and wait for the interpreter to exit. */
  close(): Promise<number | null> {
    if (!this.exited) {
      this.child.stdin.end();
    }
    return this.exitPromise;
  }
}

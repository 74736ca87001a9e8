// Boots the real document service for the UI tests and tears it down after.

import { spawn, type ChildProcess } from "node:child_process";
import type { TestProject } from "vitest/node";

let server: ChildProcess | undefined;

const PORT = 8361;
const BASE = `http://127.0.0.1:${PORT}`;

async function waitUntilReady(): Promise<void> {
  const deadline = Date.now() + 30_000;
  for (;;) {
    try {
      const response = await fetch(`${BASE}/domains`);
      if (response.ok) return;
    } catch {
      // not up yet
    }
    if (Date.now() > deadline) {
      throw new Error("document service did not come up on " + BASE);
    }
    await new Promise((resolve) => setTimeout(resolve, 200));
  }
}

export default async function setup(project: TestProject): Promise<() => void> {
  server = spawn(
    "python3",
    ["-m", "adtrees.cli", "serve", "--listen", `127.0.0.1:${PORT}`],
    { cwd: "..", stdio: "ignore" },
  );
  await waitUntilReady();
  project.provide("apiBase", BASE);
  return () => {
    server?.kill();
  };
}

declare module "vitest" {
  export interface ProvidedContext {
    apiBase: string;
  }
}

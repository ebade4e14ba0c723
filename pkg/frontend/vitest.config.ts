import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    testTimeout: 30_000,
    hookTimeout: 30_000,
    // each test file runs its own service instance on its own port; keep
    // files sequential so the sandbox is not juggling several servers
    fileParallelism: false,
  },
});

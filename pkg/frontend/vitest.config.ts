import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    environment: "node",
    // The acceptance tests spawn a real backend and walk whole sessions.
    testTimeout: 60_000,
    hookTimeout: 60_000,
  },
});

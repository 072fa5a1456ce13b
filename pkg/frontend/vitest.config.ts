import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "node",
    include: ["tests/**/*.test.ts"],
    // the integration suite boots the real HTTP service as a child process
    testTimeout: 60_000,
    hookTimeout: 60_000,
  },
});

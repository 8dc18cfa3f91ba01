import { defineConfig } from "vitest/config";

export default defineConfig({
  base: "./",
  build: {
    outDir: "dist",
    target: "es2022",
  },
  server: {
    proxy: {
      "/api": "http://127.0.0.1:8734",
    },
  },
  test: {
    environment: "node",
    include: ["test/**/*.test.ts"],
  },
});
